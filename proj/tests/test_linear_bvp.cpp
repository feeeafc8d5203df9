#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "ed/linear_bvp.hpp"

using namespace ed;

namespace {

GridFn sample(const Grid& g, const std::function<double(double)>& f) {
  GridFn r = GridFn::zeros(g);
  for (int i = 0; i < g.node_count(); ++i)
    r.values[static_cast<std::size_t>(i)] = f(g.node(i));
  return r;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Deterministic uniform(-1, 1) draws straight from the raw mt19937 stream,
// so the suite is identical on every platform.
double draw(std::mt19937& gen) {
  return static_cast<double>(gen()) / 4294967296.0 * 2.0 - 1.0;
}

// A smooth random inhomogeneity: three trigonometric modes plus a constant.
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
      out += a[static_cast<std::size_t>(m - 1)] * std::cos(m * std::numbers::pi * x) +
             b[static_cast<std::size_t>(m - 1)] * std::sin(m * std::numbers::pi * x);
    return out;
  };
}

// O(h^4) oracle solution at the nodes of g: the finite-difference solve on g
// and on its once-refined grid, Richardson-extrapolated. Keeps the oracle
// path fully independent of the quadrature path while eliminating its own
// O(h^2) truncation error from the comparison.
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

}  // namespace

TEST_CASE("zero inhomogeneity produces the zero solution") {
  const ModelParams p = params_with_delta_j(1.0, 0.6, 1.0 / 3.0, 0.0);
  const Grid g(100);
  const AiryBasis basis(p, g);
  const AirySolveResult r = solve_linear_bvp(GridFn::zeros(g), basis);
  CHECK(max_abs(r.F.values) == 0.0);
  CHECK(max_abs(r.G.values) == 0.0);
  CHECK(r.d_A == 0.0);
  CHECK(r.d_B == 0.0);
  CHECK(r.residual_norm == 0.0);
}

TEST_CASE("solution and derivative are linear in the inhomogeneity") {
  const ModelParams p = params_with_delta_j(1.0, 0.6, 1.0 / 3.0, 0.0);
  const Grid g(400);
  const AiryBasis basis(p, g);

  const GridFn r1 = sample(g, [](double x) { return std::sin(3.0 * x) + 0.25 * x * x; });
  const GridFn r2 = sample(g, [](double x) { return std::cos(2.0 * x) - x; });
  GridFn r12 = GridFn::zeros(g);
  for (std::size_t k = 0; k < r12.values.size(); ++k)
    r12.values[k] = r1.values[k] + r2.values[k];

  const AirySolveResult s1 = solve_linear_bvp(r1, basis);
  const AirySolveResult s2 = solve_linear_bvp(r2, basis);
  const AirySolveResult s12 = solve_linear_bvp(r12, basis);

  const double scale = std::max({1.0, max_abs(s1.F.values), max_abs(s2.F.values)});
  for (std::size_t k = 0; k < r12.values.size(); ++k) {
    CHECK(std::fabs(s12.F.values[k] - s1.F.values[k] - s2.F.values[k]) <=
          1e-12 * scale);
    CHECK(std::fabs(s12.G.values[k] - s1.G.values[k] - s2.G.values[k]) <=
          1e-12 * scale);
  }
}

TEST_CASE("scaling the inhomogeneity scales the solution") {
  const ModelParams p = params_with_delta_j(2.0, 0.6, 1.0 / 3.0, 0.0);
  const Grid g(400);
  const AiryBasis basis(p, g);
  const GridFn r = sample(g, [](double x) { return std::sin(3.0 * x) + 0.25 * x * x; });
  GridFn re = GridFn::zeros(g);
  const double eps = 3.7;
  for (std::size_t k = 0; k < r.values.size(); ++k) re.values[k] = eps * r.values[k];

  const AirySolveResult s = solve_linear_bvp(r, basis);
  const AirySolveResult se = solve_linear_bvp(re, basis);
  const double scale = std::max(1.0, eps * max_abs(s.F.values));
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    CHECK(std::fabs(se.F.values[k] - eps * s.F.values[k]) <= 1e-12 * scale);
    CHECK(std::fabs(se.G.values[k] - eps * s.G.values[k]) <= 1e-12 * scale);
  }
}

TEST_CASE("quadrature path agrees with the finite-difference oracle") {
  // 3 random draws per parameter pair, 9 pairs spanning two decades of nu.
  std::mt19937 gen(0xED00Bu);
  const Grid g(1000);
  for (double nu : {0.1, 1.0, 10.0}) {
    for (double c0 : {0.1, 1.0 / 3.0, 0.45}) {
      const ModelParams p = params_with_delta_j(nu, 0.6, c0, 0.0);
      const AiryBasis basis(p, g);
      for (int rep = 0; rep < 3; ++rep) {
        CAPTURE(nu);
        CAPTURE(c0);
        CAPTURE(rep);
        const auto f = random_trig(gen);
        const AirySolveResult s = solve_linear_bvp(sample(g, f), basis);
        const std::vector<double> yo = oracle_extrapolated(g, f, p);
        const double scale = std::max(1.0, max_abs(s.F.values));
        double diff = 0.0;
        for (std::size_t k = 0; k < yo.size(); ++k)
          diff = std::max(diff, std::fabs(s.F.values[k] - yo[k]));
        CHECK(diff <= 1e-6 * scale);

        // Raw single-grid oracle: O(h^2) truncation, a few 1e-6 at worst.
        const AirySolveResult raw = solve_linear_bvp_oracle(sample(g, f), p);
        double rdiff = 0.0;
        for (std::size_t k = 0; k < yo.size(); ++k)
          rdiff = std::max(rdiff, std::fabs(s.F.values[k] - raw.F.values[k]));
        CHECK(rdiff <= 8e-6 * scale);

        // Both boundary derivatives vanish (Neumann), and the operator
        // residual of the quadrature solution is small. The oracle's
        // reported derivative is a second-order difference of its own
        // solution, so its boundary values only vanish to truncation level:
        // ~h^2 u''', and u''' grows like 1/nu since nu u'' = q u + r.
        CHECK(std::fabs(s.G.values.front()) <= 1e-8 * scale);
        CHECK(std::fabs(s.G.values.back()) <= 1e-8 * scale);
        CHECK(std::fabs(raw.G.values.front()) <= 2e-5 / nu * scale);
        CHECK(std::fabs(raw.G.values.back()) <= 2e-5 / nu * scale);
        CHECK(s.residual_norm <= 1e-3 * scale);
      }
    }
  }
}

TEST_CASE("operator residual of the constant-drive case") {
  const ModelParams p = params_with_delta_j(1.0, 0.6, 1.0 / 3.0, 0.0);
  const Grid g(1000);
  const AiryBasis basis(p, g);
  const AirySolveResult s = solve_linear_bvp(GridFn::constant(g, 1.0), basis);
  CHECK(s.residual_norm <= 1e-5);
  CHECK(max_abs(s.F.values) > 0.1);  // sanity: the solve did something
}

TEST_CASE("finite-difference oracle refines at second order") {
  const ModelParams p = params_with_delta_j(1.0, 0.6, 1.0 / 3.0, 0.0);
  const auto f = [](double x) { return std::sin(3.0 * x) + 0.25 * x * x; };

  // Truth: the quadrature path on a 4x grid (its own error is ~1e-13 there).
  const Grid gt(4000);
  const AiryBasis basis_t(p, gt);
  const AirySolveResult truth = solve_linear_bvp(sample(gt, f), basis_t);

  double err[2];
  const int sizes[2] = {500, 1000};
  for (int t = 0; t < 2; ++t) {
    const Grid g(sizes[t]);
    const AirySolveResult s = solve_linear_bvp_oracle(sample(g, f), p);
    const int stride = gt.n_intervals() / g.n_intervals();
    double e = 0.0;
    for (int i = 0; i < g.node_count(); ++i)
      e = std::max(e, std::fabs(s.F.values[static_cast<std::size_t>(i)] -
                                truth.F.values[static_cast<std::size_t>(stride * i)]));
    err[t] = e;
  }
  CHECK(err[0] / err[1] > 3.6);
  CHECK(err[0] / err[1] < 4.4);
}

TEST_CASE("quadrature path refines at higher than second order") {
  const ModelParams p = params_with_delta_j(1.0, 0.6, 1.0 / 3.0, 0.0);
  const auto f = [](double x) { return std::sin(3.0 * x) + 0.25 * x * x; };
  const Grid gt(4000);
  const AirySolveResult truth = solve_linear_bvp(sample(gt, f), AiryBasis(p, gt));

  double err[2];
  const int sizes[2] = {250, 500};
  for (int t = 0; t < 2; ++t) {
    const Grid g(sizes[t]);
    const AirySolveResult s = solve_linear_bvp(sample(g, f), AiryBasis(p, g));
    const int stride = gt.n_intervals() / g.n_intervals();
    double e = 0.0;
    for (int i = 0; i < g.node_count(); ++i)
      e = std::max(e, std::fabs(s.F.values[static_cast<std::size_t>(i)] -
                                truth.F.values[static_cast<std::size_t>(stride * i)]));
    err[t] = e;
  }
  CHECK(err[0] / err[1] > 8.0);  // consistent with the O(h^4) quadrature
  CHECK(err[1] <= 1e-10);
}

TEST_CASE("derivative samples are consistent with the values") {
  // Central differences of F reproduce G to O(h^2).
  const ModelParams p = params_with_delta_j(1.0, 0.6, 1.0 / 3.0, 0.0);
  const Grid g(1000);
  const AirySolveResult s =
      solve_linear_bvp(sample(g, [](double x) { return std::cos(2.0 * x); }),
                       AiryBasis(p, g));
  const double h = g.h();
  double worst = 0.0;
  for (int i = 1; i + 1 < g.node_count(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double fd = (s.F.values[k + 1] - s.F.values[k - 1]) / (2.0 * h);
    worst = std::max(worst, std::fabs(fd - s.G.values[k]));
  }
  CHECK(worst <= 1e-5);
  // The value function also carries its derivative samples.
  CHECK(s.F.has_derivative());
  CHECK(s.F.derivatives == s.G.values);
}

TEST_CASE("grid mismatch and minimum-size preconditions") {
  const ModelParams p = params_with_delta_j(1.0, 0.6, 1.0 / 3.0, 0.0);
  const AiryBasis basis(p, Grid(100));
  CHECK_THROWS_AS((void)solve_linear_bvp(GridFn::zeros(Grid(50)), basis),
                  GridMismatchError);
  const AiryBasis tiny(p, Grid(2));
  CHECK_THROWS_AS((void)solve_linear_bvp(GridFn::zeros(Grid(2)), tiny),
                  PreconditionError);
}
