#pragma once

#include <cmath>
#include <vector>

#include "ed/grid.hpp"
#include "ed/params.hpp"

namespace ed {

/// Scaled Airy function values at argument s >= 0.
///
/// Bi grows like e^{+zeta} and Ai decays like e^{-zeta} with
/// zeta = (2/3) s^{3/2}, so raw doubles overflow/underflow long before the
/// parameter regimes of interest are exhausted. The representation stored
/// here is exact under multiplication by e^{+-zeta}: the value fields carry
///   ai_e  = Ai(s)  e^{+zeta},   bi_e  = Bi(s)  e^{-zeta},
///   aip_e = Ai'(s) e^{+zeta},   bip_e = Bi'(s) e^{-zeta},
/// all of which are O(1)-ish positive/negative quantities, and downstream
/// kernels recombine pure exponent differences analytically. A
/// (log-magnitude, sign) view is provided for reporting.
struct AiryValues {
  double s = 0.0;
  double zeta = 0.0;
  double ai_e = 0.0;
  double bi_e = 0.0;
  double aip_e = 0.0;
  double bip_e = 0.0;

  // Unscaled values; may underflow to 0 / overflow to inf at large zeta.
  double ai() const noexcept { return ai_e * std::exp(-zeta); }
  double bi() const noexcept { return bi_e * std::exp(zeta); }
  double aip() const noexcept { return aip_e * std::exp(-zeta); }
  double bip() const noexcept { return bip_e * std::exp(zeta); }

  // (log-magnitude, sign) view of the four values.
  double log_abs_ai() const noexcept { return std::log(std::fabs(ai_e)) - zeta; }
  double log_abs_bi() const noexcept { return std::log(std::fabs(bi_e)) + zeta; }
  double log_abs_aip() const noexcept { return std::log(std::fabs(aip_e)) - zeta; }
  double log_abs_bip() const noexcept { return std::log(std::fabs(bip_e)) + zeta; }
  int sign_ai() const noexcept { return ai_e > 0 ? 1 : (ai_e < 0 ? -1 : 0); }
  int sign_bi() const noexcept { return bi_e > 0 ? 1 : (bi_e < 0 ? -1 : 0); }
  int sign_aip() const noexcept { return aip_e > 0 ? 1 : (aip_e < 0 ? -1 : 0); }
  int sign_bip() const noexcept { return bip_e > 0 ? 1 : (bip_e < 0 ? -1 : 0); }
};

/// Evaluates Ai, Bi and their derivatives at s >= 0 in the scaled
/// representation above. Relative accuracy is ~1e-14 or better across the
/// whole range (double-double Maclaurin summation up to the crossover,
/// asymptotic expansions with optimal truncation beyond it). Throws
/// DomainError for s < 0 or non-finite s.
AiryValues eval_airy(double s);

/// The Airy basis of the linearized field equation on a grid.
///
/// The homogeneous equation nu y'' = 2 c(x) y has solutions
/// A(x) = Ai(s(x)), B(x) = Bi(s(x)) with the affine argument map
/// s(x) = 2 c(x) / kappa, kappa = [4 nu (c1-c0)^2]^{1/3}. Their Wronskian in
/// x is the constant W = A B' - B A' = [2(c1-c0) / (pi^3 nu)]^{1/3}.
///
/// Per-node values are stored in the scaled representation, with
/// x-derivatives (chain rule by the constant s'(x)):
///   alpha     = A(x)  e^{+zeta},   beta     = B(x)  e^{-zeta},
///   alpha_dot = A'(x) e^{+zeta},   beta_dot = B'(x) e^{-zeta}.
class AiryBasis {
 public:
  /// Builds the basis on the grid and verifies the Wronskian identity at
  /// every node to relative 1e-8 (throws Error on violation, which would
  /// indicate a broken evaluation, never seen in practice).
  AiryBasis(const ModelParams& p, const Grid& g);

  const ModelParams& params() const noexcept { return params_; }
  const Grid& grid() const noexcept { return grid_; }

  double kappa() const noexcept { return kappa_; }
  double s_of_x(double x) const noexcept { return 2.0 * params_.c(x) / kappa_; }
  /// ds/dx, constant on the grid.
  double s_prime() const noexcept { return s_prime_; }
  /// Wronskian of A and B in x (equals s'(x)/pi).
  double wronskian() const noexcept { return wronskian_; }

  const std::vector<double>& alpha() const noexcept { return alpha_; }
  const std::vector<double>& beta() const noexcept { return beta_; }
  const std::vector<double>& alpha_dot() const noexcept { return alpha_dot_; }
  const std::vector<double>& beta_dot() const noexcept { return beta_dot_; }
  const std::vector<double>& zeta() const noexcept { return zeta_; }

 private:
  ModelParams params_;
  Grid grid_;
  double kappa_;
  double s_prime_;
  double wronskian_;
  std::vector<double> alpha_, beta_, alpha_dot_, beta_dot_, zeta_;
};

/// Free-function spelling of the basis constructor.
AiryBasis build_basis(const ModelParams& p, const Grid& g);

}  // namespace ed
