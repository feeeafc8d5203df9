#pragma once

#include "ed/grid.hpp"
#include "ed/params.hpp"

namespace ed {

/// Exhaustive solution classes of the junction BVP:
///   A: E > 0, E' < 0, c_minus > c_plus on the interior;
///   B: E < 0, E' > 0, c_plus > c_minus on the interior;
///   C: the exact zero-field solution (only at j = j0).
/// Unclassified is never produced by a converged solver; it is stored (not
/// thrown) for intermediate objects such as truncated-series iterates whose
/// sign pattern is transiently inconsistent.
enum class SolutionClass { A, B, C, Unclassified };

char to_char(SolutionClass c) noexcept;

/// Absolute tolerance for treating a field value as zero in classification
/// and sign tests: below reference-solver accuracy, above rounding noise.
inline constexpr double kClassZeroTol = 1e-9;

/// Tolerance on |delta_j| under which the zero-field solution is exact.
inline constexpr double kExactCurrentTol = 1e-14;

/// A full solution of the junction model on a grid: the field E (with
/// derivative samples), the reconstructed concentrations, the constant
/// fluxes phi_pm, the class label, and nu * max E^2 (the linearization
/// quality measure).
struct FieldSolution {
  ModelParams params;
  GridFn E;        // values and derivatives
  GridFn c_plus;   // values only
  GridFn c_minus;  // values only
  double phi_plus = 0.0;
  double phi_minus = 0.0;
  SolutionClass class_label = SolutionClass::Unclassified;
  double nu_e_max_sq = 0.0;
  bool positivity_warning = false;  // a reconstructed concentration was <= 0
};

/// The exact zero-field solution: E = 0, c_pm = c0 + (c1-c0) x,
/// phi_pm = c0 - c1, class C. Requires |delta_j| < 1e-14; throws
/// PreconditionError otherwise.
FieldSolution planck_solution(const ModelParams& p, const Grid& g);

/// Pure algebra: reconstructs c_pm and phi_pm from the field and its
/// derivative via the first integrals of the transport system,
///   c_pm(x)  = 1/4 nu E(x)^2 + {(c1-c0) + 1/4 nu [E(0)^2 - E(1)^2]} x
///              + c0 - 1/4 nu E(0)^2  +-  1/2 nu E'(x),
///   phi_pm   = tau_mp {2(c0-c1) + 1/2 nu [E(1)^2 - E(0)^2]}  +-  j.
/// Never throws; nonpositive concentrations set positivity_warning, and an
/// inconsistent sign pattern stores Unclassified.
FieldSolution reconstruct(const GridFn& E, const ModelParams& p);

/// Assigns the class label from the sign pattern of E and E' (tolerance
/// kClassZeroTol). Throws ClassificationError when no class matches, which
/// signals a failed solve: genuine solutions always classify.
SolutionClass classify(const FieldSolution& s);

/// The reflection map x -> 1-x:
///   c_Rpm(x) = c_pm(1-x),  E_R(x) = -E(1-x),  phi_Rpm = -phi_pm,  j_R = -j.
/// The image solves the system with boundary data (c1, c0, -j); applying
/// reflect twice returns the input exactly (the map is an involution in
/// floating point). Class A maps to B and vice versa.
FieldSolution reflect(const FieldSolution& s);

/// Max-node deviation of c_plus + c_minus - 1/2 nu E^2 + (phi_plus +
/// phi_minus) x from its value at the left endpoint. Zero (to rounding) for
/// any solution built from the first integrals.
double first_integral_deviation(const FieldSolution& s);

/// |phi_plus + phi_minus - {2(c0-c1) + 1/2 nu [E(1)^2 - E(0)^2]}|.
double flux_sum_residual(const FieldSolution& s);

/// |tau_plus phi_plus - tau_minus phi_minus - j|.
double current_residual(const FieldSolution& s);

}  // namespace ed
