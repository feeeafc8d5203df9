#pragma once

#include "ed/grid.hpp"
#include "ed/solution.hpp"

namespace ed {

/// Options for the reference solver.
struct RefOptions {
  double newton_tol = 1e-10;       // max-norm residual target
  int newton_max_iter = 50;        // per continuation stage
  double continuation_step = 0.25; // largest delta_j increment when marching
  double damping_min = 1.0 / 1048576.0;  // 2^-20, backtracking floor

  /// Reference refinement: the discrete system is solved on refine_a x and
  /// refine_b x subdivisions of the requested grid and Richardson-
  /// extrapolated at the shared nodes ((q^2 u_b - u_a)/(q^2 - 1) with
  /// q = refine_b/refine_a), pushing the O(h^2) discretization error of a
  /// single grid (~1e-7 at 1000 intervals) down to ~1e-13, which error
  /// traces near the 1e-7 reliability floor require. Set extrapolate =
  /// false to solve the requested grid directly.
  bool extrapolate = true;
  int refine_a = 8;
  int refine_b = 16;
};

/// A reference solution plus solver metadata.
struct RefSolution {
  FieldSolution field;
  int newton_iterations = 0;    // summed over continuation stages and grids
  double final_residual_norm = 0.0;  // of the finest solved grid
  int continuation_steps = 0;
};

/// Solves the five-ODE first-order system
///   c+' = E c+ - phi+,   c-' = -E c- - phi-,   nu E' = c+ - c-,
///   phi+' = 0,           phi-' = 0,
/// with boundary conditions c+-(0) = c0, c+-(1) = c1 and
/// tau+ phi+(0) - tau- phi-(0) = j, by damped Newton iteration on a
/// box/midpoint collocation of the uniform grid (five residual equations
/// per interval, in difference-quotient form). The initial guess is the
/// zero-field solution; if Newton fails from there, the solver restarts
/// with continuation, marching delta_j from 0 to its target in steps of at
/// most continuation_step with warm starts.
///
/// The returned E' is recovered from the third equation as (c+ - c-)/nu,
/// exact with respect to the discrete system. Throws NonConvergenceError
/// (carrying the best residual and continuation progress) on failure.
RefSolution solve_reference(const ModelParams& p, const Grid& g,
                            const RefOptions& opts = {});

/// Max-norm of the discrete-system residual for an arbitrary candidate
/// sampled on the solver grid (E and E' from the candidate's field, c_pm
/// from its concentration arrays, phi_pm constant). Lets series partial
/// sums be plugged into the reference discretization as a diagnostic.
/// Throws GridMismatchError if the candidate is not on grid g.
double residual(const ModelParams& p, const Grid& g,
                const FieldSolution& candidate);

}  // namespace ed
