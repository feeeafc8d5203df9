#pragma once

#include "ed/airy.hpp"
#include "ed/grid.hpp"

namespace ed {

/// Result of the linear Neumann solve nu y'' = 2 c(x) y + R(x),
/// y'(0) = y'(1) = 0.
struct AirySolveResult {
  GridFn F;  // the solution y
  GridFn G;  // the derivative y'
  /// Coefficients of the homogeneous solutions A(x), B(x) in the
  /// variation-of-parameters form. Reported unscaled; for extreme nu they
  /// can overflow/underflow even though the solution itself is finite.
  double d_A = 0.0;
  double d_B = 0.0;
  /// Max-norm finite-difference residual of nu y'' - 2 c y - R over interior
  /// nodes; O(h^2) for a quadrature-built solution.
  double residual_norm = 0.0;
};

/// Solves the linear Neumann problem by variation of parameters on the Airy
/// basis:
///   y(x) = -(1/(nu W)) [ A(x) I_B(0,x) - B(x) I_A(0,x) ] + d_A A(x) + d_B B(x),
/// with I_B, I_A cumulative integrals of R*B and R*A and the constants d_A,
/// d_B fixed by the Neumann conditions. All kernel products are assembled
/// from the scaled basis values with analytic exponent differences, so no
/// overflowing intermediate is ever materialized; both boundary derivatives
/// vanish identically in exact arithmetic under this assembly.
///
/// Cumulative integrals use composite Simpson on interval pairs, with the
/// midpoint value of each scaled product R*A, R*B obtained by 4-point cubic
/// interpolation of the product itself (one-sided stencils in the first and
/// last intervals).
///
/// Throws SingularityError if the boundary-condition denominator is within
/// 1e-14 of zero (never reached for valid parameters) and QuadratureError if
/// the accumulation turns non-finite.
AirySolveResult solve_linear_bvp(const GridFn& R, const AiryBasis& basis);

/// Independent verification path: second-order central finite differences
/// with ghost-node Neumann closures, solved as a tridiagonal system. Agrees
/// with solve_linear_bvp to ~1e-6 max-norm on the default grid (both are
/// O(h^2)). Throws LinearSolveError if the tridiagonal system is singular.
AirySolveResult solve_linear_bvp_oracle(const GridFn& R, const ModelParams& p);

}  // namespace ed
