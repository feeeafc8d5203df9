#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ed/refsolver.hpp"
#include "ed/series.hpp"

namespace ed {

/// Convergence verdicts, in the operational sense of the error trace only:
/// "converged" means the error stayed below the reliability floor through
/// the order horizon, not that convergence is proven.
enum class Verdict { converged, still_decreasing, diverging, unclear };

std::string to_string(Verdict v);

/// Error values below this floor are recorded but flagged unreliable.
inline constexpr double kReliabilityFloor = 1e-7;
/// Thresholds defining the n3 / n7 convergence orders.
inline constexpr double kThreshold3 = 1e-3;
inline constexpr double kThreshold7 = 1e-7;

/// Per-order weighted error measures of a series run against the reference
/// solution. With dE = E^(n) - E_ref and dG = E^(n)' - E_ref' sampled on the
/// full node set,
///   delta_n(w) = max over nodes of  2w |dE| + 2(1-w) |dG|,
/// so delta_n(1) is the field-only error, delta_n(0) the derivative-only
/// error, and delta_n(0.5) = max(|dE| + |dG|) the headline measure. The
/// Pareto-maximal set of per-node pairs (|dE|, |dG|) is kept per order, so
/// delta_n(w) is exact for any w on demand.
struct ErrorTrace {
  int n_requested = 0;  // order horizon asked for
  int n_max = 0;        // orders actually traced (less if the run stopped)

  // Index = order; slot 0 unused.
  std::vector<double> delta1;     // delta_n(1)
  std::vector<double> delta0;     // delta_n(0)
  std::vector<double> delta_half; // delta_n(0.5)
  std::vector<double> delta_bar;  // L2 measure, sqrt(int dE^2 + dG^2)
  std::vector<std::uint8_t> unreliable;  // delta_half below the floor
  std::vector<std::vector<std::pair<double, double>>> fronts;

  /// Smallest order beyond which delta_n(0.5) stays below 1e-3 / 1e-7
  /// through n_max; absent if it never does. A single later excursion above
  /// the threshold invalidates a candidate.
  std::optional<int> n3;
  std::optional<int> n7;

  Verdict verdict_label = Verdict::unclear;
  double nu_e_max_sq = 0.0;  // of the reference solution
  double delta_1 = 0.0;      // delta_half at order 1

  /// Exact delta_n(w) for any weight, from the stored Pareto front.
  double delta_w(int n, double w) const;
};

/// Computes the full error trace of a series run against the reference.
/// Throws GridMismatchError if the two are not on the same grid.
ErrorTrace error_trace(const SeriesRun& run, const RefSolution& ref);

/// The alternative L2 error measure for a single order:
///   sqrt( int_0^1 [ (E^(n)-E_ref)^2 + (E^(n)'-E_ref')^2 ] dx ),
/// integrated by composite Simpson over the grid.
double error_trace_integral(const SeriesRun& run, const RefSolution& ref,
                            int n);

/// Applies the operational convergence rules to a trace:
///   converged        if n7 exists (the error stayed below 1e-7 through
///                    n_max once past n7);
///   diverging        if the final error exceeds 4x the trace minimum and
///                    the least-squares slope of log delta over the last 50
///                    orders is positive;
///   still_decreasing if no n7 but that trailing slope is negative;
///   unclear          otherwise.
Verdict verdict(const ErrorTrace& t);

/// Reciprocity of the field and derivative errors between consecutive
/// orders: a violation at base order n means both delta_{n+1}(1) >
/// delta_n(1) and delta_{n+1}(0) > delta_n(0). Checked for n in
/// [1, n7 + 1], or over the whole trace when n7 is absent.
struct ConditionQReport {
  int n_low = 1;
  int n_high = 0;  // last base order checked
  bool holds = true;
  std::vector<int> violations;
};

ConditionQReport condition_q(const ErrorTrace& t);

/// Weights for which the weighted error declines strictly monotonically
/// over orders 1..n7 and stays below 1e-7 from n7 to n_max. Only interior
/// weights (0 < w < 1) count toward the conjecture flag.
struct WeightSearchResult {
  std::vector<double> weights_scanned;
  std::vector<double> monotone_weights;
  bool conjecture_flag = false;
};

/// The default scan: {0.05, 0.10, ..., 0.95} plus the named values
/// {0.2, 0.25, 0.5} (already on the lattice, kept for clarity).
std::vector<double> default_weight_scan();

/// Scans the given weights (default scan when empty). With refine = true, a
/// second pass adds a 0.01-step neighborhood around every hit. Every
/// reported weight is re-verified against the trace before inclusion.
/// Returns an empty result (no weights monotone) when the trace has no n7.
WeightSearchResult weight_search(const ErrorTrace& t,
                                 std::vector<double> weights = {},
                                 bool refine = false);

}  // namespace ed
