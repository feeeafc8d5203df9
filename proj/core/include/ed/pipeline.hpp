#pragma once

#include "ed/analysis.hpp"
#include "ed/refsolver.hpp"
#include "ed/series.hpp"

namespace ed {

/// Everything one parameter case produces: the reference solution, the
/// series run, the error trace, and the derived diagnostics.
struct CaseResult {
  ModelParams params;
  Grid grid{1000};
  int n_max = 0;
  RefSolution ref;
  SeriesRun run;
  ErrorTrace trace;
  ConditionQReport q;
  WeightSearchResult weights;
};

/// Runs the full single-case pipeline: reference solve, series recursion,
/// error trace, convergence verdict, reciprocity check, weight search.
CaseResult run_case(const ModelParams& p, const Grid& g, int n_max,
                    const RefOptions& ref_opts = {},
                    bool refine_weights = false);

}  // namespace ed
