#include "ed/pipeline.hpp"

namespace ed {

CaseResult run_case(const ModelParams& p, const Grid& g, int n_max,
                    const RefOptions& ref_opts, bool refine_weights) {
  CaseResult r;
  r.params = p;
  r.grid = g;
  r.n_max = n_max;
  r.ref = solve_reference(p, g, ref_opts);
  const AiryBasis basis(p, g);
  r.run = run_series(p, n_max, basis);
  r.trace = error_trace(r.run, r.ref);
  r.q = condition_q(r.trace);
  r.weights = weight_search(r.trace, {}, refine_weights);
  return r;
}

}  // namespace ed
