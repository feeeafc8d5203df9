#include "ed/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ed/errors.hpp"

namespace ed {
namespace {

double max_abs_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

void require_terms_through(const std::vector<SeriesTerm>& terms, int order,
                           const char* who) {
  if (order >= 1 && static_cast<int>(terms.size()) <= order)
    throw OrderError(std::string(who) +
                     ": lower-order terms missing through order " +
                     std::to_string(order));
}

}  // namespace

const SeriesTerm& SeriesRun::term(int n) const {
  if (n < 1 || n >= static_cast<int>(terms.size()))
    throw OrderError("SeriesRun::term: order " + std::to_string(n) +
                     " not computed");
  return terms[static_cast<std::size_t>(n)];
}

SeriesTerm first_order(const ModelParams& p, const AiryBasis& basis) {
  SeriesTerm t;
  t.order = 1;
  t.R = GridFn::constant(basis.grid(), -2.0 * p.delta_j);
  AirySolveResult sol = solve_linear_bvp(t.R, basis);
  t.E = std::move(sol.F);
  t.max_abs = max_abs_of(t.E.values);
  return t;
}

GridFn convolve_U(const std::vector<SeriesTerm>& terms, int n) {
  if (n < 2) throw OrderError("convolve_U: the square convolution starts at order 2");
  require_terms_through(terms, n - 1, "convolve_U");

  const Grid& g = terms[1].E.grid;
  GridFn u = GridFn::zeros(g);
  const std::size_t nn = u.values.size();

  // U_n = sum_{k=1}^{n-1} E_k E_{n-k}, folded symmetrically.
  for (int k = 1; 2 * k < n; ++k) {
    const auto& a = terms[static_cast<std::size_t>(k)].E.values;
    const auto& b = terms[static_cast<std::size_t>(n - k)].E.values;
    for (std::size_t i = 0; i < nn; ++i) u.values[i] += 2.0 * a[i] * b[i];
  }
  if (n % 2 == 0) {
    const auto& a = terms[static_cast<std::size_t>(n / 2)].E.values;
    for (std::size_t i = 0; i < nn; ++i) u.values[i] += a[i] * a[i];
  }
  return u;
}

GridFn assemble_R(const std::vector<SeriesTerm>& terms,
                  const std::vector<std::vector<double>>& u_table, int n,
                  const ModelParams& p) {
  if (n < 2)
    throw OrderError("assemble_R: inhomogeneities start at order 2");
  if (static_cast<int>(u_table.size()) <= n ||
      u_table[static_cast<std::size_t>(n)].empty())
    throw OrderError("assemble_R: U-table entry for order " +
                     std::to_string(n) + " missing");

  const Grid& g = terms[1].E.grid;
  const std::size_t nn = static_cast<std::size_t>(g.node_count());
  const auto& un = u_table[static_cast<std::size_t>(n)];
  const double dt = p.tau_minus - p.tau_plus;
  const double endpoint_drive = dt * (un.front() - un.back());

  if (n == 2)
    return GridFn::constant(g, 0.5 * p.nu * endpoint_drive);

  require_terms_through(terms, n - 2, "assemble_R");

  // Three-factor convolution V_n(x, y) = sum_{k=1}^{n-2} E_k(x) U_{n-k}(y),
  // needed only at y = 0, y = 1 and y = x.
  std::vector<double> v0(nn, 0.0), v1(nn, 0.0), vx(nn, 0.0);
  for (int k = 1; k <= n - 2; ++k) {
    const auto& ek = terms[static_cast<std::size_t>(k)].E.values;
    const auto& um = u_table[static_cast<std::size_t>(n - k)];
    if (um.empty())
      throw OrderError("assemble_R: U-table entry for order " +
                       std::to_string(n - k) + " missing");
    const double um0 = um.front();
    const double um1 = um.back();
    for (std::size_t i = 0; i < nn; ++i) {
      v0[i] += ek[i] * um0;
      v1[i] += ek[i] * um1;
      vx[i] += ek[i] * um[i];
    }
  }

  GridFn r = GridFn::zeros(g);
  for (std::size_t i = 0; i < nn; ++i) {
    const double x = g.node(static_cast<int>(i));
    r.values[i] = 0.5 * p.nu *
                  (x * (v0[i] - v1[i]) - v0[i] + vx[i] + endpoint_drive);
  }
  return r;
}

SeriesRun run_series(const ModelParams& p, int n_max, const AiryBasis& basis) {
  if (n_max < 1 || n_max > kSeriesOrderCap)
    throw PreconditionError("run_series: n_max must lie in [1, " +
                            std::to_string(kSeriesOrderCap) + "]");
  if (basis.params().nu != p.nu || basis.params().c0 != p.c0)
    throw PreconditionError(
        "run_series: basis was built for different nu or c0");

  SeriesRun run;
  run.params = p;
  run.grid = basis.grid();
  run.status.n_requested = n_max;
  run.terms.resize(1);    // slot 0 unused
  run.u_table.resize(2);  // slots 0 and 1 unused

  SeriesTerm t1 = first_order(p, basis);
  run.partial_sum = t1.E;
  const std::size_t nn = run.partial_sum.values.size();
  run.status.n_reached = 1;
  const bool t1_overflow = t1.max_abs > kSeriesOverflowCutoff;
  run.terms.push_back(std::move(t1));
  if (t1_overflow) {
    run.status.overflow = true;
    run.status.overflow_order = 1;
    return run;
  }

  for (int n = 2; n <= n_max; ++n) {
    GridFn un = convolve_U(run.terms, n);
    run.u_table.push_back(std::move(un.values));
    GridFn rn = assemble_R(run.terms, run.u_table, n, p);
    AirySolveResult sol = solve_linear_bvp(rn, basis);

    SeriesTerm t;
    t.order = n;
    t.E = std::move(sol.F);
    t.R = std::move(rn);
    t.u0 = run.u_table[static_cast<std::size_t>(n)].front();
    t.u1 = run.u_table[static_cast<std::size_t>(n)].back();
    t.max_abs = max_abs_of(t.E.values);

    for (std::size_t i = 0; i < nn; ++i) {
      run.partial_sum.values[i] += t.E.values[i];
      run.partial_sum.derivatives[i] += t.E.derivatives[i];
    }
    run.status.n_reached = n;
    const bool overflow = t.max_abs > kSeriesOverflowCutoff;
    run.terms.push_back(std::move(t));
    if (overflow) {
      run.status.overflow = true;
      run.status.overflow_order = n;
      break;
    }
  }
  return run;
}

FieldSolution partial_sum_solution(const SeriesRun& run, int n) {
  if (n < 1 || n > run.status.n_reached)
    throw OrderError("partial_sum_solution: order " + std::to_string(n) +
                     " not computed (reached " +
                     std::to_string(run.status.n_reached) + ")");
  GridFn e = GridFn::zeros(run.grid, /*with_derivative=*/true);
  const std::size_t nn = e.values.size();
  for (int k = 1; k <= n; ++k) {
    const auto& t = run.terms[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < nn; ++i) {
      e.values[i] += t.E.values[i];
      e.derivatives[i] += t.E.derivatives[i];
    }
  }
  return reconstruct(e, run.params);
}

FirstOrderPhis first_order_phis(const ModelParams& p) noexcept {
  return {p.c0 - p.c1 + p.delta_j, p.c0 - p.c1 - p.delta_j};
}

FirstOrderSolution first_order_reconstruction(const SeriesTerm& e1,
                                              const ModelParams& p) {
  if (e1.order != 1)
    throw PreconditionError(
        "first_order_reconstruction: needs the order-1 term");
  if (!e1.E.has_derivative())
    throw PreconditionError(
        "first_order_reconstruction: term lacks derivative samples");
  const Grid& g = e1.E.grid;
  FirstOrderSolution s;
  s.c_plus = GridFn::zeros(g);
  s.c_minus = GridFn::zeros(g);
  for (int i = 0; i < g.node_count(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double base = p.c(g.node(i));
    const double odd = 0.5 * p.nu * e1.E.derivatives[k];
    s.c_plus.values[k] = base + odd;
    s.c_minus.values[k] = base - odd;
  }
  s.phis = first_order_phis(p);
  return s;
}

}  // namespace ed
