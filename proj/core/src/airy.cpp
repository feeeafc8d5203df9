#include "ed/airy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ed/errors.hpp"

namespace ed {
namespace {

// ---------------------------------------------------------------------------
// Double-double arithmetic (~32 significant digits), the minimum needed to
// survive the catastrophic cancellation in Ai = c1*f - c2*g near the upper
// end of the power-series range: both products are ~e^{+zeta} large while the
// difference is ~e^{-zeta} small, so the series must be summed with roughly
// twice the target precision.
// ---------------------------------------------------------------------------

struct dd {
  double hi = 0.0;
  double lo = 0.0;
};

inline dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// Requires |a| >= |b| or a == 0.
inline dd quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd dd_add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  return quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

inline dd dd_sub(dd a, dd b) { return dd_add(a, {-b.hi, -b.lo}); }

inline dd dd_mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  return quick_two_sum(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

inline dd dd_mul_d(dd a, double b) {
  dd p = two_prod(a.hi, b);
  return quick_two_sum(p.hi, p.lo + a.lo * b);
}

inline dd dd_div_d(dd a, double b) {
  const double q1 = a.hi / b;
  const dd p = two_prod(q1, b);
  const double q2 = (((a.hi - p.hi) - p.lo) + a.lo) / b;
  return quick_two_sum(q1, q2);
}

inline double dd_to_double(dd a) { return a.hi + a.lo; }

// Series coefficients to double-double precision:
//   kC1   = Ai(0)  = Bi(0)/sqrt(3)  = 3^{-2/3} / Gamma(2/3)
//   kC2   = -Ai'(0) = Bi'(0)/sqrt(3) = 3^{-1/3} / Gamma(1/3)
constexpr dd kC1{0.3550280538878172, 2.05233632436212e-17};
constexpr dd kC2{0.2588194037928068, -2.522243111610832e-17};
constexpr dd kSqrt3{1.7320508075688772, 1.0035084221806903e-16};

// Crossover between the power series (exact but cancellation-limited, hence
// the double-double carry) and the asymptotic expansion (optimally truncated,
// accurate only once zeta is large). At s = 9 both branches agree to ~1e-16
// relative, which is the safest handoff point.
constexpr double kSeriesCrossover = 9.0;
constexpr int kSeriesTermCap = 80;
constexpr int kAsymptoticTermCap = 60;

void eval_series(double s, AiryValues& out) {
  const dd s2 = two_prod(s, s);
  const dd s3 = dd_mul_d(s2, s);

  // Maclaurin sums for the two independent solutions f, g of y'' = s y and
  // their derivatives. Term recurrences avoid dividing by s so s = 0 is
  // exact:
  //   f : t_k = t_{k-1} s^3 / ((3k)(3k-1)),     t_0 = 1
  //   f': u_k = u_{k-1} s^3 / ((3k-1)(3k-3)),   u_1 = s^2/2
  //   g : t_k = t_{k-1} s^3 / ((3k+1)(3k)),     t_0 = s
  //   g': v_k = v_{k-1} s^3 / ((3k)(3k-2)),     v_1 = s^3/3, g' = 1 + sum v
  dd f{1.0, 0.0};
  dd g{s, 0.0};
  dd fp = dd_div_d(s2, 2.0);
  dd gp{1.0, 0.0};

  dd tf = f;
  dd tg = g;
  dd tfp = fp;
  dd tgp = dd_div_d(s3, 3.0);
  gp = dd_add(gp, tgp);

  for (int k = 1; k <= kSeriesTermCap; ++k) {
    tf = dd_div_d(dd_mul(tf, s3), static_cast<double>(3 * k) * (3 * k - 1));
    f = dd_add(f, tf);
    tg = dd_div_d(dd_mul(tg, s3), static_cast<double>(3 * k) * (3 * k + 1));
    g = dd_add(g, tg);
    // Advance u to index k+1 and v to index k+1.
    tfp = dd_div_d(dd_mul(tfp, s3), static_cast<double>(3 * k + 2) * (3 * k));
    fp = dd_add(fp, tfp);
    tgp = dd_div_d(dd_mul(tgp, s3),
                   static_cast<double>(3 * k + 3) * (3 * k + 1));
    gp = dd_add(gp, tgp);

    if (std::fabs(tf.hi) <= 1e-36 * std::fabs(f.hi) &&
        std::fabs(tg.hi) <= 1e-36 * std::max(1.0, std::fabs(g.hi)) &&
        std::fabs(tfp.hi) <= 1e-36 * std::max(1.0, std::fabs(fp.hi)) &&
        std::fabs(tgp.hi) <= 1e-36 * std::fabs(gp.hi))
      break;
  }

  const dd ai = dd_sub(dd_mul(kC1, f), dd_mul(kC2, g));
  const dd bi = dd_mul(kSqrt3, dd_add(dd_mul(kC1, f), dd_mul(kC2, g)));
  const dd aip = dd_sub(dd_mul(kC1, fp), dd_mul(kC2, gp));
  const dd bip = dd_mul(kSqrt3, dd_add(dd_mul(kC1, fp), dd_mul(kC2, gp)));

  const double ezp = std::exp(out.zeta);
  const double ezm = std::exp(-out.zeta);
  out.ai_e = dd_to_double(ai) * ezp;
  out.bi_e = dd_to_double(bi) * ezm;
  out.aip_e = dd_to_double(aip) * ezp;
  out.bip_e = dd_to_double(bip) * ezm;
}

void eval_asymptotic(double s, AiryValues& out) {
  // Poincare expansions in 1/zeta, summed to the smallest term. For s > 9,
  // zeta > 18 and the smallest term is far below 1e-16 relative, so
  // truncation error is negligible.
  const double zi = 1.0 / out.zeta;
  double u = 1.0;
  double zp = 1.0;
  double sign = 1.0;
  double sa = 1.0, sb = 1.0, sap = 1.0, sbp = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k <= kAsymptoticTermCap; ++k) {
    u *= static_cast<double>(6 * k - 5) * (6 * k - 3) * (6 * k - 1) /
         (216.0 * k * (2 * k - 1));
    const double v = u * (6 * k + 1) / (1.0 - 6 * k);
    zp *= zi;
    sign = -sign;
    const double tu = u * zp;
    if (tu >= prev) break;  // past the optimal truncation point
    sa += sign * tu;
    sb += tu;
    sap += sign * v * zp;
    sbp += v * zp;
    if (tu <= 1e-17 * sb) break;
    prev = tu;
  }

  const double s4 = std::sqrt(std::sqrt(s));  // s^{1/4}
  const double rpi = 1.0 / std::sqrt(std::numbers::pi);
  out.ai_e = 0.5 * rpi * sa / s4;
  out.bi_e = rpi * sb / s4;
  out.aip_e = -0.5 * rpi * s4 * sap;
  out.bip_e = rpi * s4 * sbp;
}

}  // namespace

AiryValues eval_airy(double s) {
  if (!std::isfinite(s) || s < 0.0)
    throw DomainError("eval_airy: argument must be finite and >= 0");
  AiryValues out;
  out.s = s;
  out.zeta = (2.0 / 3.0) * s * std::sqrt(s);
  if (s <= kSeriesCrossover)
    eval_series(s, out);
  else
    eval_asymptotic(s, out);
  return out;
}

AiryBasis::AiryBasis(const ModelParams& p, const Grid& g)
    : params_(p), grid_(g) {
  const double slope = p.c1 - p.c0;
  if (!(slope > 0.0) || !(p.nu > 0.0))
    throw PreconditionError(
        "AiryBasis: requires nu > 0 and c0 < c1 (increasing concentration "
        "profile)");

  kappa_ = std::cbrt(4.0 * p.nu * slope * slope);
  s_prime_ = 2.0 * slope / kappa_;
  wronskian_ = s_prime_ / std::numbers::pi;

  const int n = g.node_count();
  alpha_.resize(static_cast<std::size_t>(n));
  beta_.resize(static_cast<std::size_t>(n));
  alpha_dot_.resize(static_cast<std::size_t>(n));
  beta_dot_.resize(static_cast<std::size_t>(n));
  zeta_.resize(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const AiryValues v = eval_airy(s_of_x(g.node(i)));
    alpha_[k] = v.ai_e;
    beta_[k] = v.bi_e;
    alpha_dot_[k] = v.aip_e * s_prime_;
    beta_dot_[k] = v.bip_e * s_prime_;
    zeta_[k] = v.zeta;

    // The scaled Wronskian alpha*beta_dot - beta*alpha_dot equals the
    // unscaled one exactly (the e^{+-zeta} factors cancel), giving a strong
    // per-node consistency check on the evaluation.
    const double w = alpha_[k] * beta_dot_[k] - beta_[k] * alpha_dot_[k];
    if (std::fabs(w - wronskian_) > 1e-8 * std::fabs(wronskian_))
      throw Error("AiryBasis: Wronskian identity violated at a node");
  }
}

AiryBasis build_basis(const ModelParams& p, const Grid& g) {
  return AiryBasis(p, g);
}

}  // namespace ed
