#pragma once

#include <vector>

#include "ed/errors.hpp"

namespace ed {

/// Uniform grid on the unit interval. The number of intervals must be even
/// because the composite-Simpson quadrature used throughout pairs intervals
/// around midpoints. Nodes are x_i = i/n for i = 0..n, with the endpoints
/// exact by construction.
class Grid {
 public:
  explicit Grid(int n_intervals = 1000) : n_intervals_(n_intervals) {
    if (n_intervals_ <= 0) throw DomainError("Grid: n_intervals must be positive");
    if (n_intervals_ % 2 != 0) throw DomainError("Grid: n_intervals must be even");
  }

  int n_intervals() const noexcept { return n_intervals_; }
  int node_count() const noexcept { return n_intervals_ + 1; }
  double h() const noexcept { return 1.0 / n_intervals_; }
  double node(int i) const noexcept {
    return static_cast<double>(i) / n_intervals_;
  }

  std::vector<double> nodes() const {
    std::vector<double> x(static_cast<std::size_t>(node_count()));
    for (int i = 0; i <= n_intervals_; ++i) x[static_cast<std::size_t>(i)] = node(i);
    return x;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_intervals_;
};

/// A scalar function sampled at the grid nodes, optionally paired with
/// derivative samples on the same nodes. Plain value semantics; treated as
/// immutable once populated.
struct GridFn {
  Grid grid{1000};
  std::vector<double> values;
  std::vector<double> derivatives;  // empty when no derivative is carried

  GridFn() = default;

  GridFn(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    validate();
  }

  GridFn(const Grid& g, std::vector<double> v, std::vector<double> d)
      : grid(g), values(std::move(v)), derivatives(std::move(d)) {
    validate();
  }

  static GridFn zeros(const Grid& g, bool with_derivative = false) {
    GridFn f;
    f.grid = g;
    f.values.assign(static_cast<std::size_t>(g.node_count()), 0.0);
    if (with_derivative)
      f.derivatives.assign(static_cast<std::size_t>(g.node_count()), 0.0);
    return f;
  }

  static GridFn constant(const Grid& g, double value) {
    GridFn f;
    f.grid = g;
    f.values.assign(static_cast<std::size_t>(g.node_count()), value);
    return f;
  }

  bool has_derivative() const noexcept { return !derivatives.empty(); }

  void validate() const {
    const auto n = static_cast<std::size_t>(grid.node_count());
    if (values.size() != n)
      throw GridMismatchError("GridFn: value array length does not match grid");
    if (!derivatives.empty() && derivatives.size() != n)
      throw GridMismatchError("GridFn: derivative array length does not match grid");
  }
};

}  // namespace ed
