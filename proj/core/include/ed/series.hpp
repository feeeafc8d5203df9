#pragma once

#include <vector>

#include "ed/airy.hpp"
#include "ed/grid.hpp"
#include "ed/linear_bvp.hpp"
#include "ed/solution.hpp"

namespace ed {

/// One order of the perturbation series: the term E_n (with derivative),
/// the inhomogeneity R_n it solved, the cached endpoint values of the
/// square-convolution U_n, and max |E_n|.
struct SeriesTerm {
  int order = 0;
  GridFn E;        // E_n with derivative samples (from the linear solve)
  GridFn R;        // R_n, values only
  double u0 = 0.0; // U_order(0); zero for order 1 (U starts at order 2)
  double u1 = 0.0; // U_order(1)
  double max_abs = 0.0;
};

/// Status flags of a series run.
struct SeriesStatus {
  bool overflow = false;  // a term exceeded the clean-divergence cutoff
  int overflow_order = 0; // the order at which that happened (0 if none)
  int n_requested = 0;    // order horizon the run was asked for
  int n_reached = 0;      // highest order actually computed
};

/// Cutoff above which a series run stops early: far above any meaningful
/// scale, far below floating-point infinity, so divergent runs terminate
/// cleanly with a recorded status instead of propagating inf/NaN.
inline constexpr double kSeriesOverflowCutoff = 1e30;

/// Highest order the series driver accepts; error values are not considered
/// meaningful beyond this horizon.
inline constexpr int kSeriesOrderCap = 500;

/// A completed (or early-stopped) series run: all terms, the per-order
/// square-convolutions U_k (full grid functions, needed by the three-factor
/// convolutions at later orders), and the running partial sum at the highest
/// computed order.
struct SeriesRun {
  ModelParams params;
  Grid grid{1000};
  std::vector<SeriesTerm> terms;            // index = order; slot 0 unused
  std::vector<std::vector<double>> u_table; // index = order; valid from 2
  GridFn partial_sum;                       // E^(n_reached) with derivative
  SeriesStatus status;

  const SeriesTerm& term(int n) const;
};

/// First order: solves nu E1'' - 2 c(x) E1 = R1 with R1 = -2 delta_j
/// (constant) under the Neumann conditions. With delta_j = 0 the term is
/// identically zero and the zero-field solution is exact.
SeriesTerm first_order(const ModelParams& p, const AiryBasis& basis);

/// The square convolution U_n(x) of E(x)^2 = sum_n U_n(x):
///   U_2 = E_1^2,
///   U_{2m}   = 2 [E_1 E_{2m-1} + ... + E_{m-1} E_{m+1}] + E_m^2,
///   U_{2m-1} = 2 [E_1 E_{2m-2} + ... + E_{m-1} E_m].
/// Requires terms of orders 1..n-1; throws OrderError otherwise.
GridFn convolve_U(const std::vector<SeriesTerm>& terms, int n);

/// The order-n inhomogeneity. For n = 2 it is the constant
///   R_2 = 1/2 nu (tau_minus - tau_plus) [U_2(0) - U_2(1)];
/// for n >= 3, with the three-factor convolution
/// V_n(x,y) = sum_{k=1}^{n-2} E_k(x) U_{n-k}(y) evaluated only at
/// y in {0, 1, x},
///   R_n(x) = 1/2 nu { x [V_n(x,0) - V_n(x,1)] - V_n(x,0) + V_n(x,x)
///                     + (tau_minus - tau_plus) [U_n(0) - U_n(1)] }.
/// Requires terms 1..n-1 and u_table entries 2..n; throws OrderError
/// otherwise.
GridFn assemble_R(const std::vector<SeriesTerm>& terms,
                  const std::vector<std::vector<double>>& u_table, int n,
                  const ModelParams& p);

/// Runs the recursion R_n -> (E_n, E_n') for n = 1..n_max, accumulating
/// partial sums and the U-table. Stops early with overflow status (not an
/// exception) if max |E_n| exceeds the cutoff. n_max must lie in
/// [1, kSeriesOrderCap]; throws PreconditionError otherwise.
SeriesRun run_series(const ModelParams& p, int n_max, const AiryBasis& basis);

/// Reconstructs the full order-n approximate solution from the partial sum
/// E^(n) = E_1 + ... + E_n. Throws OrderError if n exceeds the computed
/// range.
FieldSolution partial_sum_solution(const SeriesRun& run, int n);

/// Closed-form first-order fluxes: phi_pm^(1) = c0 - c1 +- (j - j0).
struct FirstOrderPhis {
  double phi_plus = 0.0;
  double phi_minus = 0.0;
};
FirstOrderPhis first_order_phis(const ModelParams& p) noexcept;

/// Closed-form first-order reconstruction around the zero-field solution:
///   c_pm^(1)(x) = c0 + (c1-c0) x +- 1/2 nu E1'(x),
/// with the fluxes of first_order_phis. (The quadratic field terms of the
/// full reconstruction are second order and excluded here.)
struct FirstOrderSolution {
  GridFn c_plus;
  GridFn c_minus;
  FirstOrderPhis phis;
};
FirstOrderSolution first_order_reconstruction(const SeriesTerm& e1,
                                              const ModelParams& p);

}  // namespace ed
