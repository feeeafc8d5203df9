#include "ed/refsolver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ed/errors.hpp"
#include "ed/params.hpp"

namespace ed {
namespace {

// Unknown layout: five per node, (c+, c-, E, phi+, phi-).
constexpr int kCp = 0, kCm = 1, kE = 2, kPp = 3, kPm = 4;

// Declared bandwidths of the collocation Jacobian (upper bounds; dgbsv only
// needs them to cover every nonzero).
constexpr int kKl = 7, kKu = 6;
constexpr int kLdab = 2 * kKl + kKu + 1;

inline std::size_t idx(int node, int comp) {
  return static_cast<std::size_t>(5 * node + comp);
}

// Residual of the box/midpoint collocation in difference-quotient (/h) form.
// Row layout: three left boundary rows, five rows per interval, two right
// boundary rows.
void eval_residual(const ModelParams& p, int n_intervals, double h,
                   const std::vector<double>& u, std::vector<double>& res) {
  const double inv_h = 1.0 / h;
  res.assign(u.size(), 0.0);

  res[0] = u[idx(0, kCp)] - p.c0;
  res[1] = u[idx(0, kCm)] - p.c0;
  res[2] = p.tau_plus * u[idx(0, kPp)] - p.tau_minus * u[idx(0, kPm)] - p.j;

  std::size_t r = 3;
  for (int i = 0; i < n_intervals; ++i) {
    const double cpm = 0.5 * (u[idx(i, kCp)] + u[idx(i + 1, kCp)]);
    const double cmm = 0.5 * (u[idx(i, kCm)] + u[idx(i + 1, kCm)]);
    const double em = 0.5 * (u[idx(i, kE)] + u[idx(i + 1, kE)]);
    const double ppm = 0.5 * (u[idx(i, kPp)] + u[idx(i + 1, kPp)]);
    const double pmm = 0.5 * (u[idx(i, kPm)] + u[idx(i + 1, kPm)]);
    res[r++] = (u[idx(i + 1, kCp)] - u[idx(i, kCp)]) * inv_h - (em * cpm - ppm);
    res[r++] = (u[idx(i + 1, kCm)] - u[idx(i, kCm)]) * inv_h + em * cmm + pmm;
    res[r++] = p.nu * (u[idx(i + 1, kE)] - u[idx(i, kE)]) * inv_h - cpm + cmm;
    res[r++] = (u[idx(i + 1, kPp)] - u[idx(i, kPp)]) * inv_h;
    res[r++] = (u[idx(i + 1, kPm)] - u[idx(i, kPm)]) * inv_h;
  }

  const int n_last = n_intervals;
  res[r++] = u[idx(n_last, kCp)] - p.c1;
  res[r] = u[idx(n_last, kCm)] - p.c1;
}

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Banded Jacobian in LAPACK gb storage (column-major; entry (r, c) lives at
// AB[kl + ku + r - c + c*ldab]).
void assemble_jacobian(const ModelParams& p, int n_intervals, double h,
                       const std::vector<double>& u, std::vector<double>& ab) {
  const auto m = static_cast<std::size_t>(u.size());
  ab.assign(static_cast<std::size_t>(kLdab) * m, 0.0);
  auto at = [&ab](std::size_t r, std::size_t c) -> double& {
    return ab[static_cast<std::size_t>(kKl + kKu) + r - c +
              c * static_cast<std::size_t>(kLdab)];
  };
  const double inv_h = 1.0 / h;

  at(0, idx(0, kCp)) = 1.0;
  at(1, idx(0, kCm)) = 1.0;
  at(2, idx(0, kPp)) = p.tau_plus;
  at(2, idx(0, kPm)) = -p.tau_minus;

  std::size_t r = 3;
  for (int i = 0; i < n_intervals; ++i) {
    const double cpm = 0.5 * (u[idx(i, kCp)] + u[idx(i + 1, kCp)]);
    const double cmm = 0.5 * (u[idx(i, kCm)] + u[idx(i + 1, kCm)]);
    const double em = 0.5 * (u[idx(i, kE)] + u[idx(i + 1, kE)]);

    at(r, idx(i, kCp)) = -inv_h - 0.5 * em;
    at(r, idx(i + 1, kCp)) = inv_h - 0.5 * em;
    at(r, idx(i, kE)) = -0.5 * cpm;
    at(r, idx(i + 1, kE)) = -0.5 * cpm;
    at(r, idx(i, kPp)) = 0.5;
    at(r, idx(i + 1, kPp)) = 0.5;
    ++r;

    at(r, idx(i, kCm)) = -inv_h + 0.5 * em;
    at(r, idx(i + 1, kCm)) = inv_h + 0.5 * em;
    at(r, idx(i, kE)) = 0.5 * cmm;
    at(r, idx(i + 1, kE)) = 0.5 * cmm;
    at(r, idx(i, kPm)) = 0.5;
    at(r, idx(i + 1, kPm)) = 0.5;
    ++r;

    at(r, idx(i, kE)) = -p.nu * inv_h;
    at(r, idx(i + 1, kE)) = p.nu * inv_h;
    at(r, idx(i, kCp)) = -0.5;
    at(r, idx(i + 1, kCp)) = -0.5;
    at(r, idx(i, kCm)) = 0.5;
    at(r, idx(i + 1, kCm)) = 0.5;
    ++r;

    at(r, idx(i, kPp)) = -inv_h;
    at(r, idx(i + 1, kPp)) = inv_h;
    ++r;

    at(r, idx(i, kPm)) = -inv_h;
    at(r, idx(i + 1, kPm)) = inv_h;
    ++r;
  }

  const int n_last = n_intervals;
  at(r, idx(n_last, kCp)) = 1.0;
  ++r;
  at(r, idx(n_last, kCm)) = 1.0;
}

std::vector<double> planck_start(const ModelParams& p, int n_intervals) {
  std::vector<double> u(static_cast<std::size_t>(5 * (n_intervals + 1)), 0.0);
  const double phi0 = p.c0 - p.c1;
  for (int i = 0; i <= n_intervals; ++i) {
    const double c = p.c(static_cast<double>(i) / n_intervals);
    u[idx(i, kCp)] = c;
    u[idx(i, kCm)] = c;
    u[idx(i, kE)] = 0.0;
    u[idx(i, kPp)] = phi0;
    u[idx(i, kPm)] = phi0;
  }
  return u;
}

struct NewtonOutcome {
  bool converged = false;
  double residual_norm = 0.0;
  int iterations = 0;
};

// Damped Newton on the collocation system; u is updated in place.
NewtonOutcome newton(const ModelParams& p, int n_intervals,
                     const RefOptions& opts, std::vector<double>& u) {
  const double h = 1.0 / n_intervals;
  const auto m = static_cast<lapack_int>(u.size());
  std::vector<double> res, res_new, ab, step, u_new;
  std::vector<lapack_int> ipiv(u.size());

  eval_residual(p, n_intervals, h, u, res);
  double rn = max_norm(res);

  NewtonOutcome out;
  for (int iter = 0; iter < opts.newton_max_iter; ++iter) {
    if (rn < opts.newton_tol) {
      out.converged = true;
      out.residual_norm = rn;
      return out;
    }
    assemble_jacobian(p, n_intervals, h, u, ab);
    step = res;
    for (double& v : step) v = -v;
    const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, m, kKl, kKu, 1,
                                          ab.data(), kLdab, ipiv.data(),
                                          step.data(), m);
    if (info != 0)
      throw LinearSolveError(
          "solve_reference: banded solve failed (info = " +
          std::to_string(info) + ")");
    ++out.iterations;

    bool accepted = false;
    for (double lambda = 1.0; lambda >= opts.damping_min; lambda *= 0.5) {
      u_new = u;
      for (std::size_t k = 0; k < u.size(); ++k) u_new[k] += lambda * step[k];
      eval_residual(p, n_intervals, h, u_new, res_new);
      const double rn_new = max_norm(res_new);
      if (rn_new < rn) {
        u.swap(u_new);
        res.swap(res_new);
        rn = rn_new;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // stalled: no damping factor reduced the residual
  }
  out.converged = rn < opts.newton_tol;
  out.residual_norm = rn;
  return out;
}

struct GridSolve {
  std::vector<double> u;
  double residual_norm = 0.0;
  int iterations = 0;
  int continuation_steps = 0;
};

// Direct Newton from the zero-field start; on failure, march delta_j from 0
// to its target in bounded steps with warm starts.
GridSolve solve_on_grid(const ModelParams& p, int n_intervals,
                        const RefOptions& opts) {
  GridSolve gs;
  gs.u = planck_start(p, n_intervals);
  NewtonOutcome direct = newton(p, n_intervals, opts, gs.u);
  gs.iterations = direct.iterations;
  if (direct.converged) {
    gs.residual_norm = direct.residual_norm;
    return gs;
  }

  const int stages =
      std::max(1, static_cast<int>(
                      std::ceil(std::fabs(p.delta_j) / opts.continuation_step)));
  gs.u = planck_start(p, n_intervals);
  double reached = 0.0;
  for (int s = 1; s <= stages; ++s) {
    const double dj = p.delta_j * s / stages;
    const ModelParams ps = detail::make_params_unchecked(
        p.nu, p.tau_plus, p.c0, p.j0 + dj);
    NewtonOutcome stage = newton(ps, n_intervals, opts, gs.u);
    gs.iterations += stage.iterations;
    ++gs.continuation_steps;
    if (!stage.converged)
      throw NonConvergenceError(
          "solve_reference: Newton stalled at delta_j = " + std::to_string(dj) +
          " (residual " + std::to_string(stage.residual_norm) + ")",
          stage.residual_norm, reached, gs.iterations);
    reached = dj;
    gs.residual_norm = stage.residual_norm;
  }
  return gs;
}

FieldSolution extract_field(const ModelParams& p, const Grid& g,
                            const std::vector<double>& u, int stride) {
  FieldSolution s;
  s.params = p;
  s.E = GridFn::zeros(g, /*with_derivative=*/true);
  s.c_plus = GridFn::zeros(g);
  s.c_minus = GridFn::zeros(g);
  for (int i = 0; i < g.node_count(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const int node = stride * i;
    s.c_plus.values[k] = u[idx(node, kCp)];
    s.c_minus.values[k] = u[idx(node, kCm)];
    s.E.values[k] = u[idx(node, kE)];
  }
  s.phi_plus = u[idx(0, kPp)];
  s.phi_minus = u[idx(0, kPm)];
  return s;
}

void finalize_field(FieldSolution& s) {
  const double nu = s.params.nu;
  double max_abs_e = 0.0;
  for (std::size_t k = 0; k < s.E.values.size(); ++k) {
    s.E.derivatives[k] = (s.c_plus.values[k] - s.c_minus.values[k]) / nu;
    max_abs_e = std::max(max_abs_e, std::fabs(s.E.values[k]));
    if (s.c_plus.values[k] <= 0.0 || s.c_minus.values[k] <= 0.0)
      s.positivity_warning = true;
  }
  s.nu_e_max_sq = nu * max_abs_e * max_abs_e;
  s.class_label = classify(s);
}

}  // namespace

RefSolution solve_reference(const ModelParams& p, const Grid& g,
                            const RefOptions& opts) {
  RefSolution out;

  if (!opts.extrapolate) {
    GridSolve gs = solve_on_grid(p, g.n_intervals(), opts);
    out.field = extract_field(p, g, gs.u, 1);
    finalize_field(out.field);
    out.newton_iterations = gs.iterations;
    out.final_residual_norm = gs.residual_norm;
    out.continuation_steps = gs.continuation_steps;
    return out;
  }

  const int na = opts.refine_a * g.n_intervals();
  const int nb = opts.refine_b * g.n_intervals();
  if (opts.refine_a < 1 || opts.refine_b <= opts.refine_a)
    throw PreconditionError(
        "solve_reference: refinement factors must satisfy 1 <= refine_a < "
        "refine_b");

  GridSolve ga = solve_on_grid(p, na, opts);
  GridSolve gb = solve_on_grid(p, nb, opts);

  FieldSolution fa = extract_field(p, g, ga.u, opts.refine_a);
  FieldSolution fb = extract_field(p, g, gb.u, opts.refine_b);

  // Richardson extrapolation of the O(h^2) scheme at the shared nodes:
  // (q^2 u_b - u_a) / (q^2 - 1) with q the refinement ratio.
  const double q = static_cast<double>(opts.refine_b) / opts.refine_a;
  const double q2 = q * q;
  const double wb = q2 / (q2 - 1.0);
  const double wa = -1.0 / (q2 - 1.0);

  out.field = fb;
  for (std::size_t k = 0; k < out.field.E.values.size(); ++k) {
    out.field.E.values[k] = wb * fb.E.values[k] + wa * fa.E.values[k];
    out.field.c_plus.values[k] =
        wb * fb.c_plus.values[k] + wa * fa.c_plus.values[k];
    out.field.c_minus.values[k] =
        wb * fb.c_minus.values[k] + wa * fa.c_minus.values[k];
  }
  out.field.phi_plus = wb * fb.phi_plus + wa * fa.phi_plus;
  out.field.phi_minus = wb * fb.phi_minus + wa * fa.phi_minus;
  finalize_field(out.field);

  out.newton_iterations = ga.iterations + gb.iterations;
  out.final_residual_norm = gb.residual_norm;
  out.continuation_steps = ga.continuation_steps + gb.continuation_steps;
  return out;
}

double residual(const ModelParams& p, const Grid& g,
                const FieldSolution& candidate) {
  if (!(candidate.E.grid == g) || !(candidate.c_plus.grid == g) ||
      !(candidate.c_minus.grid == g))
    throw GridMismatchError("residual: candidate is not sampled on this grid");

  const int n = g.node_count();
  std::vector<double> u(static_cast<std::size_t>(5 * n), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    u[idx(i, kCp)] = candidate.c_plus.values[k];
    u[idx(i, kCm)] = candidate.c_minus.values[k];
    u[idx(i, kE)] = candidate.E.values[k];
    u[idx(i, kPp)] = candidate.phi_plus;
    u[idx(i, kPm)] = candidate.phi_minus;
  }
  std::vector<double> res;
  eval_residual(p, g.n_intervals(), g.h(), u, res);
  return max_norm(res);
}

}  // namespace ed
