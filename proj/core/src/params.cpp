#include "ed/params.hpp"

#include <cmath>
#include <string>

namespace ed {

namespace detail {

ModelParams make_params_unchecked(double nu, double tau_plus, double c0,
                                  double j) noexcept {
  ModelParams p;
  p.nu = nu;
  p.tau_plus = tau_plus;
  p.c0 = c0;
  p.j = j;
  p.tau_minus = 1.0 - tau_plus;
  p.c1 = 1.0 - c0;
  p.j0 = (p.tau_plus - p.tau_minus) * (p.c0 - p.c1);
  p.delta_j = j - p.j0;
  return p;
}

}  // namespace detail

ModelParams validate_params(double nu, double tau_plus, double c0, double j) {
  if (!std::isfinite(nu) || !std::isfinite(tau_plus) || !std::isfinite(c0) ||
      !std::isfinite(j))
    throw DomainError("validate_params: all parameters must be finite");
  if (nu <= 0.0)
    throw DomainError("validate_params: nu must be positive, got " +
                      std::to_string(nu));
  if (tau_plus <= 0.0 || tau_plus >= 1.0)
    throw DomainError("validate_params: tau_plus must lie in (0,1), got " +
                      std::to_string(tau_plus));
  if (c0 <= 0.0 || c0 >= 0.5)
    throw DomainError(
        "validate_params: c0 must lie in (0, 0.5) so that c0 < c1 = 1 - c0, "
        "got " +
        std::to_string(c0));
  return detail::make_params_unchecked(nu, tau_plus, c0, j);
}

ModelParams params_with_delta_j(double nu, double tau_plus, double c0,
                                double delta_j) {
  if (!std::isfinite(delta_j))
    throw DomainError("params_with_delta_j: delta_j must be finite");
  const double tau_minus = 1.0 - tau_plus;
  const double j0 = (tau_plus - tau_minus) * (c0 - (1.0 - c0));
  return validate_params(nu, tau_plus, c0, j0 + delta_j);
}

namespace {
// Elementary charge in esu (Gaussian-cgs units).
constexpr double kElementaryChargeEsu = 4.80320471e-10;
}  // namespace

ModelParams nondimensionalize(const DimensionalParams& d) {
  auto require_positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError(std::string("nondimensionalize: ") + name +
                        " must be positive and finite");
  };
  require_positive(d.delta, "delta");
  require_positive(d.z, "z");
  require_positive(d.k_B_T, "k_B_T");
  require_positive(d.D_plus, "D_plus");
  require_positive(d.D_minus, "D_minus");
  require_positive(d.permittivity, "permittivity");
  require_positive(d.c_hat0, "c_hat0");
  require_positive(d.c_hat1, "c_hat1");
  if (!std::isfinite(d.J_hat))
    throw DomainError("nondimensionalize: J_hat must be finite");

  const double c_ref = d.c_hat0 + d.c_hat1;
  const double ze = d.z * kElementaryChargeEsu;
  const double pi = 3.14159265358979323846;
  const double nu =
      d.permittivity * d.k_B_T / (4.0 * pi * ze * ze * d.delta * d.delta * c_ref);
  const double tau_plus = d.D_plus / (d.D_plus + d.D_minus);
  const double c0 = d.c_hat0 / c_ref;
  const double j = d.delta * d.J_hat / (ze * c_ref * (d.D_plus + d.D_minus));

  if (c0 <= 0.0 || c0 >= 0.5)
    throw DomainError(
        "nondimensionalize: resulting c0 not in (0, 0.5); the model requires "
        "c_hat0 < c_hat1");
  return validate_params(nu, tau_plus, c0, j);
}

}  // namespace ed
