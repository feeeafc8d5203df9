// Acceptance suite for the junction convergence study. Runs the full case
// table once (reference solve + series + trace + diagnostics per case, in
// parallel), then evaluates eight acceptance criteria and prints one
// PASS/FAIL line each with the measured numbers. Exit code = number of
// failed criteria.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ed/pipeline.hpp"

using namespace ed;

namespace {

// ---------------------------------------------------------------- plumbing

struct CaseSpec {
  const char* name;
  double nu, tau, c0, dj;
  int n_max;
};

// Index aliases into kCases.
enum {
  kRow1, kRow2, kRow3, kRow4, kRow5, kRow6,
  kSlowA45, kSlowA48, kProbeA50, kProbeA53, kDivA56,
  kSlowB45, kSlowB48, kProbeB49, kDivB55,
  kConvT9, kDivT9, kConvC2, kDivC2, kConvT5, kDivT5,
  kCaseCount
};

const double kThird = 1.0 / 3.0;

const CaseSpec kCases[kCaseCount] = {
    {"row1", 0.1, 0.6, kThird, -0.5, 80},
    {"row2", 0.5, 0.6, kThird, 1.5, 80},
    {"row3", 1.1, 0.6, kThird, -1.0, 80},
    {"row4", 2.5, 0.6, kThird, -2.0, 80},
    {"row5", 3.5, 0.6, kThird, 2.0, 80},
    {"row6", 10.0, 0.6, kThird, 1.0, 80},
    {"slow+2.45", 2.0, 0.6, kThird, 2.45, 500},
    {"slow+2.48", 2.0, 0.6, kThird, 2.48, 500},
    {"probe+2.50", 2.0, 0.6, kThird, 2.50, 500},
    {"probe+2.53", 2.0, 0.6, kThird, 2.53, 500},
    {"div+2.56", 2.0, 0.6, kThird, 2.56, 500},
    {"slow-2.45", 1.0, 0.6, kThird, -2.45, 500},
    {"slow-2.48", 1.0, 0.6, kThird, -2.48, 500},
    {"probe-2.49", 1.0, 0.6, kThird, -2.49, 500},
    {"div-2.55", 1.0, 0.6, kThird, -2.55, 500},
    {"tau0.9 conv", 1.0, 0.9, kThird, -2.10, 500},
    {"tau0.9 div", 1.0, 0.9, kThird, -2.15, 500},
    {"c0z0.2 conv", 1.0, 0.6, 0.2, -2.15, 500},
    {"c0z0.2 div", 1.0, 0.6, 0.2, -2.30, 500},
    {"tau0.5 conv", 1.0, 0.5, kThird, -2.5, 500},
    {"tau0.5 div", 1.0, 0.5, kThird, -2.75, 500},
};

std::vector<CaseResult> g_results(kCaseCount);
std::vector<std::string> g_errors(kCaseCount);

void run_all_cases() {
  const Grid g(1000);
  std::atomic<int> next{0};
  std::mutex io_mutex;
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= kCaseCount) return;
      const CaseSpec& s = kCases[static_cast<std::size_t>(i)];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const ModelParams p = params_with_delta_j(s.nu, s.tau, s.c0, s.dj);
        g_results[static_cast<std::size_t>(i)] = run_case(p, g, s.n_max);
      } catch (const std::exception& e) {
        g_errors[static_cast<std::size_t>(i)] = e.what();
      }
      const double dt =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      std::lock_guard<std::mutex> lock(io_mutex);
      const CaseResult& r = g_results[static_cast<std::size_t>(i)];
      if (!g_errors[static_cast<std::size_t>(i)].empty()) {
        std::printf("case %-12s FAILED: %s\n", s.name,
                    g_errors[static_cast<std::size_t>(i)].c_str());
      } else {
        std::printf(
            "case %-12s nu=%-5g dj=%-6g class=%c n3=%-4s n7=%-4s %-16s "
            "(%.1fs)\n",
            s.name, s.nu, s.dj, to_char(r.ref.field.class_label),
            r.trace.n3 ? std::to_string(*r.trace.n3).c_str() : "-",
            r.trace.n7 ? std::to_string(*r.trace.n7).c_str() : "-",
            to_string(r.trace.verdict_label).c_str(), dt);
      }
      std::fflush(stdout);
    }
  };
  unsigned nt = std::thread::hardware_concurrency();
  if (nt == 0) nt = 4;
  if (nt > 8) nt = 8;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// ------------------------------------------------------------- evaluation

struct Criterion {
  int number = 0;
  std::string title;
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "  ok   " : "  BAD  ") + what);
  }
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

bool within_rel(double got, double want, double rel) {
  return std::fabs(got - want) <= rel * std::fabs(want);
}

bool has_weight_near(const std::vector<double>& ws, double target) {
  for (double w : ws)
    if (std::fabs(w - target) <= 0.05 + 1e-9) return true;
  return false;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

GridFn sample(const Grid& g, const std::function<double(double)>& f) {
  std::vector<double> v(static_cast<std::size_t>(g.node_count()));
  for (int i = 0; i < g.node_count(); ++i)
    v[static_cast<std::size_t>(i)] = f(g.node(i));
  return GridFn(g, std::move(v));
}

double draw(std::mt19937& gen) {
  return static_cast<double>(gen()) / 4294967296.0 * 2.0 - 1.0;
}

std::function<double(double)> random_trig(std::mt19937& gen) {
  std::vector<double> a(3), b(3);
  for (int m = 0; m < 3; ++m) {
    a[static_cast<std::size_t>(m)] = draw(gen);
    b[static_cast<std::size_t>(m)] = draw(gen);
  }
  const double c = draw(gen);
  return [a, b, c](double x) {
    double out = c;
    for (int m = 1; m <= 3; ++m)
      out += a[static_cast<std::size_t>(m - 1)] *
                 std::cos(m * std::numbers::pi * x) +
             b[static_cast<std::size_t>(m - 1)] *
                 std::sin(m * std::numbers::pi * x);
    return out;
  };
}

// O(h^4) finite-difference oracle: solve on g and its refinement, then
// Richardson-extrapolate. Independent of the quadrature path.
std::vector<double> oracle_extrapolated(const Grid& g,
                                        const std::function<double(double)>& f,
                                        const ModelParams& p) {
  const Grid g2(2 * g.n_intervals());
  const AirySolveResult coarse = solve_linear_bvp_oracle(sample(g, f), p);
  const AirySolveResult fine = solve_linear_bvp_oracle(sample(g2, f), p);
  std::vector<double> out(static_cast<std::size_t>(g.node_count()));
  for (int i = 0; i < g.node_count(); ++i)
    out[static_cast<std::size_t>(i)] =
        (4.0 * fine.F.values[static_cast<std::size_t>(2 * i)] -
         coarse.F.values[static_cast<std::size_t>(i)]) /
        3.0;
  return out;
}

FieldSolution cosine_solution(const ModelParams& p, const Grid& g, double a,
                              double b) {
  std::vector<double> e(static_cast<std::size_t>(g.node_count()));
  std::vector<double> de(e.size());
  for (int i = 0; i < g.node_count(); ++i) {
    const double x = g.node(i);
    e[static_cast<std::size_t>(i)] = a + b * std::cos(std::numbers::pi * x);
    de[static_cast<std::size_t>(i)] =
        -b * std::numbers::pi * std::sin(std::numbers::pi * x);
  }
  return reconstruct(GridFn(g, e, de), p);
}

// ----------------------------------------------------------- criterion 1

Criterion criterion_table_rows() {
  Criterion c{1,
              "benchmark table rows: class exact, nu E^2max within 5%, "
              "delta_1 within 15%, n3/n7 within 2"};
  const SolutionClass want_class[6] = {SolutionClass::B, SolutionClass::A,
                                       SolutionClass::B, SolutionClass::B,
                                       SolutionClass::A, SolutionClass::A};
  const double want_ne2[6] = {0.13, 5.2, 4.5, 38.0, 61.0, 42.0};
  const double want_d1[6] = {0.013, 0.13, 0.049, 0.16, 0.17, 0.044};
  const int want_n3[6] = {2, 6, 4, 11, 10, 3};
  const int want_n7[6] = {7, 21, 11, 42, 43, 12};
  for (int r = 0; r < 6; ++r) {
    const CaseResult& cr = g_results[static_cast<std::size_t>(kRow1 + r)];
    const ErrorTrace& t = cr.trace;
    const bool row_ok =
        cr.ref.field.class_label == want_class[r] &&
        within_rel(t.nu_e_max_sq, want_ne2[r], 0.05) &&
        within_rel(t.delta_1, want_d1[r], 0.15) && t.n3 && t.n7 &&
        std::abs(*t.n3 - want_n3[r]) <= 2 && std::abs(*t.n7 - want_n7[r]) <= 2;
    c.require(row_ok,
              fmt("row%d: class=%c (%c)  nuE2max=%.4g (%.3g)  delta1=%.4g "
                  "(%.3g)  n3=%d (%d)  n7=%d (%d)",
                  r + 1, to_char(cr.ref.field.class_label),
                  to_char(want_class[r]), t.nu_e_max_sq, want_ne2[r], t.delta_1,
                  want_d1[r], t.n3 ? *t.n3 : -1, want_n3[r],
                  t.n7 ? *t.n7 : -1, want_n7[r]));
  }
  return c;
}

// ----------------------------------------------------------- criterion 2

Criterion criterion_slow_thresholds() {
  Criterion c{2, "slowly converging cases: n7 within 3% of the published "
                 "values 265/413/262/414"};
  const int idx[4] = {kSlowA45, kSlowA48, kSlowB45, kSlowB48};
  const int want[4] = {265, 413, 262, 414};
  for (int k = 0; k < 4; ++k) {
    const ErrorTrace& t = g_results[static_cast<std::size_t>(idx[k])].trace;
    const bool ok =
        t.n7 && std::fabs(*t.n7 - want[k]) <= 0.03 * want[k];
    c.require(ok, fmt("%s: n7=%d (%d +-3%%)", kCases[idx[k]].name,
                      t.n7 ? *t.n7 : -1, want[k]));
  }
  return c;
}

// ----------------------------------------------------------- criterion 3

Criterion criterion_onset_brackets() {
  Criterion c{3, "divergence onsets bracketed by the verdicts"};
  auto v = [&](int i) { return g_results[static_cast<std::size_t>(i)].trace.verdict_label; };
  auto vs = [&](int i) { return to_string(v(i)); };

  c.require(v(kSlowA45) == Verdict::converged,
            fmt("nu=2.0 dj=+2.45 -> %s (want converged)", vs(kSlowA45).c_str()));
  c.require(v(kSlowA48) == Verdict::converged,
            fmt("nu=2.0 dj=+2.48 -> %s (want converged)", vs(kSlowA48).c_str()));
  c.details.push_back(fmt("  info nu=2.0 dj=+2.50 -> %s, dj=+2.53 -> %s "
                          "(probes inside the bracket)",
                          vs(kProbeA50).c_str(), vs(kProbeA53).c_str()));
  c.require(v(kDivA56) == Verdict::diverging,
            fmt("nu=2.0 dj=+2.56 -> %s (want diverging)", vs(kDivA56).c_str()));

  c.require(v(kSlowB45) == Verdict::converged,
            fmt("nu=1.0 dj=-2.45 -> %s (want converged)", vs(kSlowB45).c_str()));
  c.require(v(kSlowB48) == Verdict::converged,
            fmt("nu=1.0 dj=-2.48 -> %s (want converged)", vs(kSlowB48).c_str()));
  c.require(v(kProbeB49) != Verdict::diverging,
            fmt("nu=1.0 dj=-2.49 -> %s (want not diverging)",
                vs(kProbeB49).c_str()));
  c.require(v(kDivB55) == Verdict::diverging,
            fmt("nu=1.0 dj=-2.55 -> %s (want diverging)", vs(kDivB55).c_str()));

  c.require(v(kConvT9) == Verdict::converged,
            fmt("tau=0.9 dj=-2.10 -> %s (want converged)", vs(kConvT9).c_str()));
  c.require(v(kDivT9) == Verdict::diverging,
            fmt("tau=0.9 dj=-2.15 -> %s (want diverging)", vs(kDivT9).c_str()));
  c.require(v(kConvC2) == Verdict::converged,
            fmt("c0=0.2 dj=-2.15 -> %s (want converged)", vs(kConvC2).c_str()));
  c.require(v(kDivC2) == Verdict::diverging,
            fmt("c0=0.2 dj=-2.30 -> %s (want diverging)", vs(kDivC2).c_str()));
  c.require(v(kConvT5) == Verdict::converged,
            fmt("tau=0.5 dj=-2.5 -> %s (want converged)", vs(kConvT5).c_str()));
  c.require(v(kDivT5) == Verdict::diverging,
            fmt("tau=0.5 dj=-2.75 -> %s (want diverging)", vs(kDivT5).c_str()));
  return c;
}

// ----------------------------------------------------------- criterion 4

// The two just-divergent cases dip to a documented shallow minimum before
// the error turns around: value at the documented order within 50%, the
// trace bottoms inside a +-15-order window, and the tail ends well above
// the global minimum.
void divergent_fingerprint(Criterion& c, int idx, int n_q, double want_val) {
  const ErrorTrace& t = g_results[static_cast<std::size_t>(idx)].trace;
  const char* name = kCases[idx].name;
  if (t.n_max < n_q + 15) {
    c.require(false, fmt("%s: trace too short (n_max=%d)", name, t.n_max));
    return;
  }
  const double at = t.delta_half[static_cast<std::size_t>(n_q)];
  c.require(within_rel(at, want_val, 0.50),
            fmt("%s: delta_half(%d)=%.4g (%.2g +-50%%)", name, n_q, at,
                want_val));

  double pre_min = t.delta_half[1], win_min = t.delta_half[static_cast<std::size_t>(n_q - 15)];
  double glob_min = t.delta_half[1];
  for (int n = 1; n <= n_q - 15; ++n)
    pre_min = std::min(pre_min, t.delta_half[static_cast<std::size_t>(n)]);
  for (int n = n_q - 15; n <= n_q + 15; ++n)
    win_min = std::min(win_min, t.delta_half[static_cast<std::size_t>(n)]);
  for (int n = 1; n <= t.n_max; ++n)
    glob_min = std::min(glob_min, t.delta_half[static_cast<std::size_t>(n)]);
  const double last = t.delta_half[static_cast<std::size_t>(t.n_max)];

  c.require(win_min < pre_min,
            fmt("%s: window [%d,%d] min %.4g below the pre-window min %.4g",
                name, n_q - 15, n_q + 15, win_min, pre_min));
  c.require(last > 4.0 * glob_min,
            fmt("%s: final delta %.4g above 4x the global min %.4g", name,
                last, glob_min));
  c.require(t.verdict_label == Verdict::diverging,
            fmt("%s: verdict %s (want diverging)", name,
                to_string(t.verdict_label).c_str()));
}

Criterion criterion_divergent_minima() {
  Criterion c{4, "just-divergent cases: shallow minimum at the documented "
                 "order and value"};
  divergent_fingerprint(c, kDivA56, 110, 5e-3);
  divergent_fingerprint(c, kDivB55, 135, 2.7e-3);
  return c;
}

// ----------------------------------------------------------- criterion 5

Criterion criterion_reciprocity() {
  Criterion c{5, "error reciprocity between consecutive orders holds/fails "
                 "for the documented cases"};
  const int holds_idx[7] = {kRow1, kRow2, kRow3, kRow4, kRow5, kRow6, kSlowA45};
  for (int i : holds_idx) {
    const ConditionQReport& q = g_results[static_cast<std::size_t>(i)].q;
    c.require(q.holds, fmt("%s: holds over [%d,%d] with %zu violations",
                           kCases[i].name, q.n_low, q.n_high,
                           q.violations.size()));
  }
  const ConditionQReport& qb = g_results[kSlowB45].q;
  const bool has8 =
      std::find(qb.violations.begin(), qb.violations.end(), 8) !=
      qb.violations.end();
  c.require(!qb.holds && has8,
            fmt("%s: fails with a violation at base order 8 (violations: %s)",
                kCases[kSlowB45].name, [&] {
                  std::string s;
                  for (int n : qb.violations) s += std::to_string(n) + " ";
                  return s.empty() ? std::string("none") : s;
                }().c_str()));
  for (int i : {kConvT9, kConvC2}) {
    const ConditionQReport& q = g_results[static_cast<std::size_t>(i)].q;
    c.require(!q.holds, fmt("%s: fails somewhere in [%d,%d] (%zu violations)",
                            kCases[i].name, q.n_low, q.n_high,
                            q.violations.size()));
  }
  return c;
}

// ----------------------------------------------------------- criterion 6

Criterion criterion_monotone_weights() {
  Criterion c{6, "documented monotone weights found within 0.05"};
  const int idx[4] = {kRow1, kRow3, kRow5, kRow6};
  const double want[4] = {0.5, 0.5, 0.25, 0.2};
  for (int k = 0; k < 4; ++k) {
    const WeightSearchResult& w =
        g_results[static_cast<std::size_t>(idx[k])].weights;
    std::string found;
    for (double x : w.monotone_weights) found += fmt("%.2f ", x);
    c.require(has_weight_near(w.monotone_weights, want[k]),
              fmt("%s: weight near %.2f among { %s}", kCases[idx[k]].name,
                  want[k], found.c_str()));
  }
  return c;
}

// ----------------------------------------------------------- criterion 7

Criterion criterion_properties() {
  Criterion c{7, "cross-cutting property suite"};

  // (a) First integral of every reference solution, and of a series
  // partial-sum reconstruction.
  double fi = 0.0;
  for (const auto& r : g_results)
    fi = std::max(fi, first_integral_deviation(r.ref.field));
  const CaseResult& row3 = g_results[kRow3];
  const FieldSolution ps =
      partial_sum_solution(row3.run, row3.trace.n7 ? *row3.trace.n7 : 10);
  fi = std::max(fi, first_integral_deviation(ps));
  c.require(fi <= 1e-8, fmt("first-integral deviation max %.3g <= 1e-8", fi));

  // (b) Randomized inhomogeneities: quadrature solve vs extrapolated
  // finite-difference oracle.
  {
    std::mt19937 gen(0xACCE57u);
    const Grid g(1000);
    double worst = 0.0;
    for (double nu : {0.1, 1.0, 10.0})
      for (double c0 : {0.1, kThird, 0.45}) {
        const ModelParams p = params_with_delta_j(nu, 0.6, c0, 0.0);
        const AiryBasis basis(p, g);
        const auto f = random_trig(gen);
        const AirySolveResult s = solve_linear_bvp(sample(g, f), basis);
        const std::vector<double> yo = oracle_extrapolated(g, f, p);
        const double scale = std::max(1.0, max_abs(s.F.values));
        for (std::size_t k = 0; k < yo.size(); ++k)
          worst = std::max(worst,
                           std::fabs(s.F.values[k] - yo[k]) / scale);
      }
    c.require(worst <= 1e-6,
              fmt("linear solves vs independent oracle: worst %.3g <= 1e-6",
                  worst));
  }

  // (c) Per-node Wronskian of the basis pair.
  {
    double worst = 0.0;
    const Grid g(1000);
    const double combos[3][2] = {{0.1, kThird}, {2.0, 0.2}, {10.0, 0.45}};
    for (const auto& nc : combos) {
      const ModelParams p = params_with_delta_j(nc[0], 0.6, nc[1], 0.0);
      const AiryBasis basis(p, g);
      const double w = basis.wronskian();
      for (int i = 0; i < g.node_count(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double got = basis.alpha()[k] * basis.beta_dot()[k] -
                           basis.beta()[k] * basis.alpha_dot()[k];
        worst = std::max(worst, std::fabs(got - w) / std::fabs(w));
      }
    }
    c.require(worst <= 1e-8,
              fmt("Wronskian per node: worst relative %.3g <= 1e-8", worst));
  }

  // (d) Linearity and scaling of the linear solver.
  {
    const ModelParams p = params_with_delta_j(2.0, 0.6, kThird, 0.0);
    const Grid g(400);
    const AiryBasis basis(p, g);
    const GridFn r1 = sample(g, [](double x) {
      return std::sin(3.0 * x) + 0.25 * x * x;
    });
    const GridFn r2 = sample(g, [](double x) { return std::cos(2.0 * x) - x; });
    std::vector<double> combo(r1.values.size());
    for (std::size_t i = 0; i < combo.size(); ++i)
      combo[i] = 2.0 * r1.values[i] - 0.5 * r2.values[i];
    const AirySolveResult s1 = solve_linear_bvp(r1, basis);
    const AirySolveResult s2 = solve_linear_bvp(r2, basis);
    const AirySolveResult sc = solve_linear_bvp(GridFn(g, combo), basis);
    double worst = 0.0;
    double scale = std::max(1.0, max_abs(sc.F.values));
    for (std::size_t i = 0; i < combo.size(); ++i)
      worst = std::max(worst, std::fabs(sc.F.values[i] - 2.0 * s1.F.values[i] +
                                        0.5 * s2.F.values[i]) /
                                  scale);
    const double eps = 3.7;
    std::vector<double> scaled(r1.values.size());
    for (std::size_t i = 0; i < scaled.size(); ++i)
      scaled[i] = eps * r1.values[i];
    const AirySolveResult se = solve_linear_bvp(GridFn(g, scaled), basis);
    for (std::size_t i = 0; i < scaled.size(); ++i)
      worst = std::max(worst, std::fabs(se.F.values[i] - eps * s1.F.values[i]) /
                                  scale);
    c.require(worst <= 1e-12,
              fmt("linearity and scaling: worst relative %.3g <= 1e-12",
                  worst));
  }

  // (e) Order-n homogeneity of the series terms in the current offset.
  {
    const Grid g(500);
    const ModelParams p1 = params_with_delta_j(1.1, 0.6, kThird, -1.0);
    const ModelParams p2 = params_with_delta_j(1.1, 0.6, kThird, -0.5);
    const AiryBasis basis(p1, g);
    const SeriesRun a = run_series(p1, 4, basis);
    const SeriesRun b = run_series(p2, 4, basis);
    double worst = 0.0;
    double lam_n = 1.0;
    for (int n = 1; n <= 4; ++n) {
      lam_n *= 0.5;
      const auto& ea = a.term(n).E.values;
      const auto& eb = b.term(n).E.values;
      const double scale = std::max(1e-30, lam_n * max_abs(ea));
      for (std::size_t i = 0; i < ea.size(); ++i)
        worst = std::max(worst, std::fabs(eb[i] - lam_n * ea[i]) / scale);
    }
    c.require(worst <= 1e-8,
              fmt("term homogeneity through order 4: worst %.3g <= 1e-8",
                  worst));
  }

  // (f) Reflection is an exact involution, and maps class A to B.
  {
    const ModelParams p = validate_params(2.0, 0.6, 0.25, 0.9);
    const FieldSolution s = cosine_solution(p, Grid(200), 0.1, 0.05);
    const FieldSolution rr = reflect(reflect(s));
    const bool exact =
        rr.E.values == s.E.values && rr.E.derivatives == s.E.derivatives &&
        rr.c_plus.values == s.c_plus.values &&
        rr.c_minus.values == s.c_minus.values && rr.params.c0 == p.c0 &&
        rr.params.j == p.j && rr.phi_plus == s.phi_plus &&
        rr.class_label == s.class_label;
    const bool swaps = reflect(g_results[kRow2].ref.field).class_label ==
                       SolutionClass::B;
    c.require(exact && swaps,
              fmt("reflection: involution %s, class A -> B %s",
                  exact ? "exact" : "NOT exact", swaps ? "ok" : "wrong"));
  }

  // (g) Square-convolution identity against a direct double loop.
  {
    const Grid g(64);
    std::mt19937 gen(0xC0FFEEu);
    std::vector<SeriesTerm> terms(6);
    for (int n = 1; n <= 5; ++n) {
      std::vector<double> v(static_cast<std::size_t>(g.node_count()));
      for (auto& x : v) x = draw(gen);
      terms[static_cast<std::size_t>(n)].order = n;
      terms[static_cast<std::size_t>(n)].E = GridFn(g, std::move(v));
    }
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n) {
      const GridFn u = convolve_U(terms, n);
      for (int i = 0; i < g.node_count(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        double direct = 0.0;
        for (int a = 1; a <= n - 1; ++a)
          direct += terms[static_cast<std::size_t>(a)].E.values[k] *
                    terms[static_cast<std::size_t>(n - a)].E.values[k];
        worst = std::max(worst, std::fabs(u.values[k] - direct));
      }
    }
    c.require(worst <= 1e-10,
              fmt("square convolution vs direct sum: worst %.3g <= 1e-10",
                  worst));
  }

  // (h) Both second-order discretizations refine at ratio ~4.
  {
    const ModelParams p = params_with_delta_j(1.0, 0.6, kThird, 0.0);
    const auto f = [](double x) { return std::sin(3.0 * x) + 0.25 * x * x; };
    const Grid gt(4000);
    const AirySolveResult truth =
        solve_linear_bvp(sample(gt, f), AiryBasis(p, gt));
    double err[2];
    const int sizes[2] = {500, 1000};
    for (int t = 0; t < 2; ++t) {
      const Grid g(sizes[t]);
      const AirySolveResult s = solve_linear_bvp_oracle(sample(g, f), p);
      const int stride = gt.n_intervals() / g.n_intervals();
      double e = 0.0;
      for (int i = 0; i < g.node_count(); ++i)
        e = std::max(e,
                     std::fabs(s.F.values[static_cast<std::size_t>(i)] -
                               truth.F.values[static_cast<std::size_t>(
                                   stride * i)]));
      err[t] = e;
    }
    const double fd_ratio = err[0] / err[1];

    const ModelParams pr = params_with_delta_j(1.0, 0.6, kThird, 1.0);
    const RefSolution ref_truth = solve_reference(pr, Grid(500));
    RefOptions single;
    single.extrapolate = false;
    double rerr[2];
    const int rsizes[2] = {250, 500};
    for (int t = 0; t < 2; ++t) {
      const Grid g(rsizes[t]);
      const RefSolution s = solve_reference(pr, g, single);
      const int stride = 500 / g.n_intervals();
      double e = 0.0;
      for (int i = 0; i < g.node_count(); ++i)
        e = std::max(
            e, std::fabs(s.field.E.values[static_cast<std::size_t>(i)] -
                         ref_truth.field.E.values[static_cast<std::size_t>(
                             stride * i)]));
      rerr[t] = e;
    }
    const double box_ratio = rerr[0] / rerr[1];
    c.require(fd_ratio > 3.6 && fd_ratio < 4.4 && box_ratio > 3.0 &&
                  box_ratio < 5.0,
              fmt("refinement ratios: oracle %.3f (3.6..4.4), reference "
                  "solver %.3f (3.0..5.0)",
                  fd_ratio, box_ratio));
  }

  return c;
}

// ----------------------------------------------------------- criterion 8

Criterion criterion_exact_limits() {
  Criterion c{8, "zero current offset reproduces the linear-profile solution "
                 "exactly; first-order fluxes match the closed form"};
  const Grid g(1000);
  const ModelParams p0 = params_with_delta_j(1.0, 0.6, kThird, 0.0);

  const RefSolution ref = solve_reference(p0, g);
  c.require(ref.newton_iterations == 0 && ref.continuation_steps == 0,
            fmt("reference solver converges with 0 iterations (got %d/%d)",
                ref.newton_iterations, ref.continuation_steps));
  c.require(ref.field.class_label == SolutionClass::C &&
                max_abs(ref.field.E.values) <= 1e-13,
            fmt("class C with max|E|=%.3g <= 1e-13",
                max_abs(ref.field.E.values)));
  const double rres = residual(p0, g, ref.field);
  // The internal norm is taken on the finest refinement grid, where the
  // difference-quotient rows amplify rounding by 1/h; the residual on the
  // requested grid has no such factor.
  c.require(ref.final_residual_norm <= 5e-12 && rres <= 1e-12,
            fmt("residuals %.3g (<=5e-12) / %.3g (<=1e-12)",
                ref.final_residual_norm, rres));

  const SeriesRun run = run_series(p0, 5, AiryBasis(p0, g));
  double tmax = 0.0;
  for (int n = 1; n <= run.status.n_reached; ++n)
    tmax = std::max(tmax, run.term(n).max_abs);
  const FieldSolution psol = partial_sum_solution(run, 5);
  const double sres = residual(p0, g, psol);
  c.require(tmax == 0.0 && psol.class_label == SolutionClass::C &&
                sres <= 1e-12,
            fmt("series terms identically zero (max %.3g), partial sum class "
                "%c, residual %.3g",
                tmax, to_char(psol.class_label), sres));

  const FieldSolution pl = planck_solution(p0, g);
  c.require(residual(p0, g, pl) <= 1e-12 &&
                first_integral_deviation(pl) <= 1e-14,
            fmt("linear-profile solution residual %.3g <= 1e-12",
                residual(p0, g, pl)));

  bool phis_ok = true;
  for (double dj : {1.5, -1.0, 0.5}) {
    const ModelParams p = params_with_delta_j(0.5, 0.6, kThird, dj);
    const FirstOrderPhis fp = first_order_phis(p);
    if (fp.phi_plus != p.c0 - p.c1 + p.delta_j ||
        fp.phi_minus != p.c0 - p.c1 - p.delta_j)
      phis_ok = false;
    const SeriesRun r1 = run_series(p, 1, AiryBasis(p, Grid(200)));
    const FirstOrderSolution fo = first_order_reconstruction(r1.term(1), p);
    if (fo.phis.phi_plus != fp.phi_plus || fo.phis.phi_minus != fp.phi_minus)
      phis_ok = false;
  }
  c.require(phis_ok, "first-order fluxes equal the closed form exactly");
  return c;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  std::printf("junction convergence study: acceptance suite (%d cases, "
              "%u threads)\n",
              kCaseCount, std::min(8u, std::max(1u, std::thread::hardware_concurrency())));
  run_all_cases();

  int broken_cases = 0;
  for (const auto& e : g_errors)
    if (!e.empty()) ++broken_cases;
  if (broken_cases > 0) {
    std::printf("\n%d case(s) failed to run; all criteria fail.\n",
                broken_cases);
    return 8;
  }

  std::vector<Criterion> cs;
  cs.push_back(criterion_table_rows());
  cs.push_back(criterion_slow_thresholds());
  cs.push_back(criterion_onset_brackets());
  cs.push_back(criterion_divergent_minima());
  cs.push_back(criterion_reciprocity());
  cs.push_back(criterion_monotone_weights());
  cs.push_back(criterion_properties());
  cs.push_back(criterion_exact_limits());

  int failed = 0;
  std::printf("\n");
  for (const auto& c : cs) {
    std::printf("[%s] criterion %d: %s\n", c.pass ? "PASS" : "FAIL", c.number,
                c.title.c_str());
    for (const auto& d : c.details) std::printf("%s\n", d.c_str());
    if (!c.pass) ++failed;
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("\n%d/8 criteria passed in %.1fs\n", 8 - failed, dt);
  return failed;
}
