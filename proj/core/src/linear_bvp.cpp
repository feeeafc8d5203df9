#include "ed/linear_bvp.hpp"

#include <cmath>
#include <vector>

#include "ed/errors.hpp"

namespace ed {
namespace {

// Midpoint-of-interval weights for a cubic through four equally spaced
// samples. Interior intervals use the centered stencil (i-1, i, i+1, i+2);
// the first and last intervals fall back to one-sided stencils.
constexpr double kMidCentered[4] = {-1.0 / 16, 9.0 / 16, 9.0 / 16, -1.0 / 16};
constexpr double kMidLeft[4] = {5.0 / 16, 15.0 / 16, -5.0 / 16, 1.0 / 16};
constexpr double kMidRight[4] = {1.0 / 16, -5.0 / 16, 15.0 / 16, 5.0 / 16};

struct Stencil {
  int j0;
  const double* w;
};

inline Stencil midpoint_stencil(int interval, int n_intervals) {
  if (interval == 0) return {0, kMidLeft};
  if (interval == n_intervals - 1) return {n_intervals - 3, kMidRight};
  return {interval - 1, kMidCentered};
}

}  // namespace

AirySolveResult solve_linear_bvp(const GridFn& R, const AiryBasis& basis) {
  R.validate();
  if (!(R.grid == basis.grid()))
    throw GridMismatchError(
        "solve_linear_bvp: forcing and basis live on different grids");
  const Grid& g = basis.grid();
  const int N = g.n_intervals();
  if (N < 4)
    throw PreconditionError(
        "solve_linear_bvp: needs at least 4 intervals for the cubic "
        "midpoint stencils");
  const double h = g.h();
  const auto& al = basis.alpha();
  const auto& be = basis.beta();
  const auto& ad = basis.alpha_dot();
  const auto& bd = basis.beta_dot();
  const auto& ze = basis.zeta();
  const auto& r = R.values;
  const double nu_w = basis.params().nu * basis.wronskian();

  // Cumulative integrals of R*B (forward) and R*A (backward), carried in the
  // scaled form
  //   p_i = e^{-zeta_i} int_0^{x_i} R B,   q_i = e^{+zeta_i} int_{x_i}^1 R A,
  // so every stored value is O(solution) and every recurrence factor
  // e^{zeta_i - zeta_{i+1}} <= 1 (zeta increases with x). Per-interval Simpson
  // uses the cubic-interpolated midpoint of the scaled product itself.
  std::vector<double> p(static_cast<std::size_t>(N) + 1, 0.0);
  std::vector<double> q(static_cast<std::size_t>(N) + 1, 0.0);

  for (int i = 0; i < N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const Stencil st = midpoint_stencil(i, N);
    double mid = 0.0;
    for (int m = 0; m < 4; ++m) {
      const auto j = static_cast<std::size_t>(st.j0 + m);
      mid += st.w[m] * r[j] * be[j] * std::exp(ze[j] - ze[k + 1]);
    }
    const double lo = r[k] * be[k] * std::exp(ze[k] - ze[k + 1]);
    const double hi = r[k + 1] * be[k + 1];
    const double step = (h / 6.0) * (lo + 4.0 * mid + hi);
    p[k + 1] = p[k] * std::exp(ze[k] - ze[k + 1]) + step;
    if (!std::isfinite(p[k + 1]))
      throw QuadratureError(
          "solve_linear_bvp: forward cumulative integral turned non-finite");
  }

  for (int i = N - 1; i >= 0; --i) {
    const auto k = static_cast<std::size_t>(i);
    const Stencil st = midpoint_stencil(i, N);
    double mid = 0.0;
    for (int m = 0; m < 4; ++m) {
      const auto j = static_cast<std::size_t>(st.j0 + m);
      mid += st.w[m] * r[j] * al[j] * std::exp(ze[k] - ze[j]);
    }
    const double lo = r[k] * al[k];
    const double hi = r[k + 1] * al[k + 1] * std::exp(ze[k] - ze[k + 1]);
    const double step = (h / 6.0) * (lo + 4.0 * mid + hi);
    q[k] = q[k + 1] * std::exp(ze[k] - ze[k + 1]) + step;
    if (!std::isfinite(q[k]))
      throw QuadratureError(
          "solve_linear_bvp: backward cumulative integral turned non-finite");
  }

  // Neumann constants. With
  //   rt  = (alpha_dot_N beta_dot_0) / (alpha_dot_0 beta_dot_N),
  //   rho = rt e^{2(zeta_0 - zeta_N)}  in (0, 1),
  // the boundary-condition denominator is proportional to (1 - rho); both
  // boundary derivatives then cancel identically in the assembly below.
  const std::size_t n_last = static_cast<std::size_t>(N);
  const double a0 = ad[0], b0 = bd[0], aN = ad[n_last], bN = bd[n_last];
  const double z0 = ze[0], zN = ze[n_last];
  const double rt = (aN * b0) / (a0 * bN);
  const double rho = rt * std::exp(2.0 * (z0 - zN));
  if (std::fabs(1.0 - rho) <= 1e-14)
    throw SingularityError(
        "solve_linear_bvp: boundary-condition denominator is numerically "
        "singular");
  const double inv1r = 1.0 / (1.0 - rho);
  const double q0 = q[0];
  const double pN = p[n_last];

  AirySolveResult out;
  out.F = GridFn::zeros(g, /*with_derivative=*/true);
  out.G = GridFn::zeros(g);

  for (int i = 0; i <= N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double zi = ze[k];
    // All four exponents are <= 0 up to one interval's width.
    const double bra_a =
        inv1r * ((b0 / a0) * q0 * std::exp(z0 - zi) -
                 rt * pN * std::exp(2.0 * z0 - zN - zi));
    const double bra_b =
        inv1r * ((aN / bN) * pN * std::exp(zi - zN) -
                 rt * q0 * std::exp(z0 + zi - 2.0 * zN));
    const double y = (-al[k] * p[k] - be[k] * q[k] + al[k] * bra_a +
                      be[k] * bra_b) /
                     nu_w;
    const double dy = (-ad[k] * p[k] - bd[k] * q[k] + ad[k] * bra_a +
                       bd[k] * bra_b) /
                      nu_w;
    if (!std::isfinite(y) || !std::isfinite(dy))
      throw QuadratureError("solve_linear_bvp: assembly turned non-finite");
    out.F.values[k] = y;
    out.G.values[k] = dy;
  }
  out.F.derivatives = out.G.values;

  // Unscaled homogeneous coefficients (reported for diagnostics; they may
  // overflow/underflow at extreme parameters even though the solution is
  // finite).
  const double kt = aN * pN * std::exp(z0 - zN) - bN * q0;
  out.d_B = kt * std::exp(-z0) / (bN * (1.0 - rho) * nu_w);
  out.d_A = -b0 * kt * std::exp(z0) / (a0 * bN * (1.0 - rho) * nu_w);

  // Finite-difference defect of the ODE at interior nodes.
  const ModelParams& mp = basis.params();
  double res = 0.0;
  const double h2 = h * h;
  for (int i = 1; i < N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double ypp =
        (out.F.values[k - 1] - 2.0 * out.F.values[k] + out.F.values[k + 1]) /
        h2;
    res = std::max(res, std::fabs(mp.nu * ypp - 2.0 * mp.c(g.node(i)) *
                                                    out.F.values[k] -
                                  r[k]));
  }
  out.residual_norm = res;
  return out;
}

AirySolveResult solve_linear_bvp_oracle(const GridFn& R,
                                        const ModelParams& p) {
  R.validate();
  const Grid& g = R.grid;
  const int N = g.n_intervals();
  const int n = g.node_count();
  const double h = g.h();
  const double h2 = h * h;
  const double k_off = p.nu / h2;

  // Second-order central differences with ghost-node Neumann closures:
  // the boundary rows fold the ghost values through y'(0) = y'(1) = 0.
  std::vector<double> sub(static_cast<std::size_t>(n), 0.0);
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sup(static_cast<std::size_t>(n), 0.0);
  std::vector<double> rhs = R.values;

  for (int i = 0; i <= N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    diag[k] = -2.0 * k_off - 2.0 * p.c(g.node(i));
    if (i > 0) sub[k] = (i == N) ? 2.0 * k_off : k_off;
    if (i < N) sup[k] = (i == 0) ? 2.0 * k_off : k_off;
  }

  // Thomas elimination (the system is strictly diagonally dominant).
  std::vector<double> cp(static_cast<std::size_t>(n), 0.0);
  std::vector<double> dp(static_cast<std::size_t>(n), 0.0);
  double piv = diag[0];
  if (piv == 0.0)
    throw LinearSolveError("solve_linear_bvp_oracle: zero pivot");
  cp[0] = sup[0] / piv;
  dp[0] = rhs[0] / piv;
  for (int i = 1; i <= N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    piv = diag[k] - sub[k] * cp[k - 1];
    if (piv == 0.0)
      throw LinearSolveError("solve_linear_bvp_oracle: zero pivot");
    cp[k] = sup[k] / piv;
    dp[k] = (rhs[k] - sub[k] * dp[k - 1]) / piv;
  }

  AirySolveResult out;
  out.F = GridFn::zeros(g, /*with_derivative=*/true);
  out.G = GridFn::zeros(g);
  auto& y = out.F.values;
  y[static_cast<std::size_t>(N)] = dp[static_cast<std::size_t>(N)];
  for (int i = N - 1; i >= 0; --i) {
    const auto k = static_cast<std::size_t>(i);
    y[k] = dp[k] - cp[k] * y[k + 1];
  }

  // Derivative samples: central differences inside, one-sided second order
  // at the ends.
  auto& dy = out.G.values;
  for (int i = 1; i < N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    dy[k] = (y[k + 1] - y[k - 1]) / (2.0 * h);
  }
  dy[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
  dy[static_cast<std::size_t>(N)] =
      (3.0 * y[static_cast<std::size_t>(N)] -
       4.0 * y[static_cast<std::size_t>(N - 1)] +
       y[static_cast<std::size_t>(N - 2)]) /
      (2.0 * h);
  out.F.derivatives = dy;

  double res = 0.0;
  for (int i = 1; i < N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double ypp = (y[k - 1] - 2.0 * y[k] + y[k + 1]) / h2;
    res = std::max(res,
                   std::fabs(p.nu * ypp - 2.0 * p.c(g.node(i)) * y[k] -
                             R.values[k]));
  }
  out.residual_norm = res;
  return out;
}

}  // namespace ed
