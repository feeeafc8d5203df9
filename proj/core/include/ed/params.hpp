#pragma once

#include "ed/errors.hpp"

namespace ed {

/// Dimensionless parameters of the two-ion junction model.
///
/// Prescribed: nu (squared Debye-length-to-width ratio), the transference
/// fraction tau_plus, the left boundary concentration c0, and the current
/// density j. Derived and stored alongside: tau_minus = 1 - tau_plus
/// (exactly), c1 = 1 - c0 (the normalization is hard-coded), the special
/// current j0 = (tau_plus - tau_minus)(c0 - c1) at which the zero-field
/// solution is exact, and the perturbation amplitude delta_j = j - j0.
struct ModelParams {
  double nu = 1.0;
  double tau_plus = 0.5;
  double c0 = 1.0 / 3.0;
  double j = 0.0;

  double tau_minus = 0.5;
  double c1 = 2.0 / 3.0;
  double j0 = 0.0;
  double delta_j = 0.0;

  /// Linear concentration profile of the zero-field solution.
  double c(double x) const noexcept { return c0 + (c1 - c0) * x; }
};

/// Validates raw parameters and populates the derived fields.
/// Rejects nu <= 0, tau_plus outside (0,1), c0 outside (0, 0.5) (the model
/// normalizes c0 + c1 = 1 and orients the interval so that c0 < c1), and any
/// non-finite input. Throws DomainError naming the violated constraint.
ModelParams validate_params(double nu, double tau_plus, double c0, double j);

/// Convenience: builds parameters from the perturbation amplitude
/// delta_j = j - j0 instead of the raw current density.
ModelParams params_with_delta_j(double nu, double tau_plus, double c0,
                                double delta_j);

namespace detail {
/// Fills the derived fields without validating the prescribed ones. Used by
/// the reflection map, whose image intentionally has c0 > c1.
ModelParams make_params_unchecked(double nu, double tau_plus, double c0,
                                  double j) noexcept;
}  // namespace detail

/// Dimensional inputs, in Gaussian-cgs units: junction width delta [cm],
/// charge-number magnitude z, thermal energy k_B*T [erg], diffusion
/// coefficients D_plus/D_minus [cm^2/s], solvent permittivity (relative,
/// dimensionless), boundary concentrations c_hat0 < c_hat1 [1/cm^3], and
/// current density J_hat [statA/cm^2].
struct DimensionalParams {
  double delta;
  double z;
  double k_B_T;
  double D_plus;
  double D_minus;
  double permittivity;
  double c_hat0;
  double c_hat1;
  double J_hat;
};

/// Maps dimensional inputs to the dimensionless parameter set:
///   c_ref = c_hat0 + c_hat1,
///   nu    = permittivity * k_B_T / (4 pi (z e)^2 delta^2 c_ref),
///   tau_pm = D_pm / (D_plus + D_minus),
///   c0    = c_hat0 / c_ref,
///   j     = delta * J_hat / (z e c_ref (D_plus + D_minus)),
/// with e the elementary charge in esu. Throws DomainError if any input is
/// non-positive where positivity is required or if the resulting c0 is not
/// in (0, 0.5) (i.e. unless c_hat0 < c_hat1).
ModelParams nondimensionalize(const DimensionalParams& d);

}  // namespace ed
