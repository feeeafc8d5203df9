#include "ed/solution.hpp"

#include <algorithm>
#include <cmath>

namespace ed {

char to_char(SolutionClass c) noexcept {
  switch (c) {
    case SolutionClass::A: return 'A';
    case SolutionClass::B: return 'B';
    case SolutionClass::C: return 'C';
    default: return '?';
  }
}

namespace {

// Sign-pattern classification that reports failure instead of throwing, so
// reconstruction of rough intermediates stays total.
SolutionClass try_classify(const FieldSolution& s) noexcept {
  const auto& E = s.E.values;
  const auto& dE = s.E.derivatives;
  const int n = s.E.grid.node_count();

  double max_abs = 0.0;
  for (double v : E) max_abs = std::max(max_abs, std::fabs(v));
  if (max_abs < kClassZeroTol) return SolutionClass::C;

  bool a_ok = true;  // E > 0 and E' < 0 on the interior
  bool b_ok = true;  // E < 0 and E' > 0 on the interior
  for (int i = 1; i + 1 < n; ++i) {
    const double e = E[static_cast<std::size_t>(i)];
    const double g = dE.empty() ? 0.0 : dE[static_cast<std::size_t>(i)];
    if (e < -kClassZeroTol || g > kClassZeroTol) a_ok = false;
    if (e > kClassZeroTol || g < -kClassZeroTol) b_ok = false;
    if (!a_ok && !b_ok) break;
  }
  if (a_ok) return SolutionClass::A;
  if (b_ok) return SolutionClass::B;
  return SolutionClass::Unclassified;
}

}  // namespace

SolutionClass classify(const FieldSolution& s) {
  const SolutionClass c = try_classify(s);
  if (c == SolutionClass::Unclassified)
    throw ClassificationError(
        "classify: sign pattern matches no solution class; this signals a "
        "solver failure");
  return c;
}

FieldSolution planck_solution(const ModelParams& p, const Grid& g) {
  if (std::fabs(p.delta_j) >= kExactCurrentTol)
    throw PreconditionError(
        "planck_solution: requires j = j0 (|delta_j| < 1e-14)");

  FieldSolution s;
  s.params = p;
  s.E = GridFn::zeros(g, /*with_derivative=*/true);
  s.c_plus = GridFn::zeros(g);
  s.c_minus = GridFn::zeros(g);
  for (int i = 0; i < g.node_count(); ++i) {
    const double c = p.c(g.node(i));
    s.c_plus.values[static_cast<std::size_t>(i)] = c;
    s.c_minus.values[static_cast<std::size_t>(i)] = c;
  }
  s.phi_plus = p.c0 - p.c1;
  s.phi_minus = p.c0 - p.c1;
  s.class_label = SolutionClass::C;
  s.nu_e_max_sq = 0.0;
  return s;
}

FieldSolution reconstruct(const GridFn& E, const ModelParams& p) {
  E.validate();
  if (!E.has_derivative())
    throw PreconditionError("reconstruct: field must carry derivative samples");

  const Grid& g = E.grid;
  const int n = g.node_count();
  const double e0_sq = E.values.front() * E.values.front();
  const double e1_sq = E.values.back() * E.values.back();

  FieldSolution s;
  s.params = p;
  s.E = E;
  s.c_plus = GridFn::zeros(g);
  s.c_minus = GridFn::zeros(g);

  // First integrals of the transport system: the common (even) part plus the
  // derivative (odd) part that splits the two species.
  const double slope = (p.c1 - p.c0) + 0.25 * p.nu * (e0_sq - e1_sq);
  const double offset = p.c0 - 0.25 * p.nu * e0_sq;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double x = g.node(i);
    const double even = 0.25 * p.nu * E.values[k] * E.values[k] + slope * x + offset;
    const double odd = 0.5 * p.nu * E.derivatives[k];
    s.c_plus.values[k] = even + odd;
    s.c_minus.values[k] = even - odd;
    if (s.c_plus.values[k] <= 0.0 || s.c_minus.values[k] <= 0.0)
      s.positivity_warning = true;
  }

  const double flux_sum = 2.0 * (p.c0 - p.c1) + 0.5 * p.nu * (e1_sq - e0_sq);
  s.phi_plus = p.tau_minus * flux_sum + p.j;
  s.phi_minus = p.tau_plus * flux_sum - p.j;

  double max_abs_e = 0.0;
  for (double v : E.values) max_abs_e = std::max(max_abs_e, std::fabs(v));
  s.nu_e_max_sq = p.nu * max_abs_e * max_abs_e;

  s.class_label = try_classify(s);
  return s;
}

FieldSolution reflect(const FieldSolution& s) {
  const int n = s.E.grid.node_count();
  FieldSolution r;
  r.params = detail::make_params_unchecked(s.params.nu, s.params.tau_plus,
                                           s.params.c1, -s.params.j);
  r.E = GridFn::zeros(s.E.grid, s.E.has_derivative());
  r.c_plus = GridFn::zeros(s.E.grid);
  r.c_minus = GridFn::zeros(s.E.grid);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto m = static_cast<std::size_t>(n - 1 - i);
    r.E.values[k] = -s.E.values[m];
    if (s.E.has_derivative()) r.E.derivatives[k] = s.E.derivatives[m];
    r.c_plus.values[k] = s.c_plus.values[m];
    r.c_minus.values[k] = s.c_minus.values[m];
  }
  r.phi_plus = -s.phi_plus;
  r.phi_minus = -s.phi_minus;
  r.nu_e_max_sq = s.nu_e_max_sq;
  r.positivity_warning = s.positivity_warning;
  switch (s.class_label) {
    case SolutionClass::A: r.class_label = SolutionClass::B; break;
    case SolutionClass::B: r.class_label = SolutionClass::A; break;
    default: r.class_label = s.class_label; break;
  }
  return r;
}

double first_integral_deviation(const FieldSolution& s) {
  const Grid& g = s.E.grid;
  const double flux_sum = s.phi_plus + s.phi_minus;
  double ref = 0.0;
  double dev = 0.0;
  for (int i = 0; i < g.node_count(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double v = s.c_plus.values[k] + s.c_minus.values[k] -
                     0.5 * s.params.nu * s.E.values[k] * s.E.values[k] +
                     flux_sum * g.node(i);
    if (i == 0)
      ref = v;
    else
      dev = std::max(dev, std::fabs(v - ref));
  }
  return dev;
}

double flux_sum_residual(const FieldSolution& s) {
  const double e0_sq = s.E.values.front() * s.E.values.front();
  const double e1_sq = s.E.values.back() * s.E.values.back();
  const double expected =
      2.0 * (s.params.c0 - s.params.c1) + 0.5 * s.params.nu * (e1_sq - e0_sq);
  return std::fabs(s.phi_plus + s.phi_minus - expected);
}

double current_residual(const FieldSolution& s) {
  return std::fabs(s.params.tau_plus * s.phi_plus -
                   s.params.tau_minus * s.phi_minus - s.params.j);
}

}  // namespace ed
