// Command-line interface to the two-ion junction solvers.
//
// Subcommands:
//   solve   - reference boundary-value solve for one parameter set
//   series  - perturbation-series run for one parameter set
//   sweep   - full pipeline over a parameter cross-product (JSON lines)
//   table1  - built-in benchmark table: six reference cases re-verified
//
// All numeric output is deterministic: rerunning a command with the same
// inputs produces byte-identical files.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ed/analysis.hpp"
#include "ed/io.hpp"
#include "ed/pipeline.hpp"
#include "ed/refsolver.hpp"
#include "ed/series.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// A single-case run configuration parsed from a flat key-value file.
/// Exactly one of `j` / `delta_j` may be given (delta_j = 0 if neither).
struct RunConfig {
  double nu = 1.0;
  double tau_plus = 0.5;
  double c0 = 1.0 / 3.0;
  std::optional<double> j;
  std::optional<double> delta_j;
  int grid_n = 1000;
  int n_max = 100;
};

/// A sweep: every scalar of RunConfig may be a value list; the cases are the
/// cross-product in fixed nesting order (nu outermost, then tau_plus, c0,
/// then the current values), so the case order is deterministic.
struct SweepSpec {
  std::vector<double> nu{1.0};
  std::vector<double> tau_plus{0.5};
  std::vector<double> c0{1.0 / 3.0};
  std::vector<double> current{0.0};  // j or delta_j values
  bool current_is_j = false;
  int grid_n = 1000;
  int n_max = 100;

  std::size_t case_count() const {
    return nu.size() * tau_plus.size() * c0.size() * current.size();
  }
};

const std::set<std::string>& allowed_keys() {
  static const std::set<std::string> keys = {
      "nu", "tau_plus", "c0", "j", "delta_j", "grid_n", "n_max"};
  return keys;
}

void reject_unknown_keys(const ed::KeyValueConfig& kv) {
  for (const auto& [key, value] : kv) {
    (void)value;
    if (!allowed_keys().count(key))
      throw ed::Error("config: unknown key '" + key + "'");
  }
}

int parse_int(const std::string& text, const char* who) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ed::Error(std::string(who) + ": not an integer: '" + text + "'");
  }
}

double parse_single(const std::string& text, const char* who) {
  const std::vector<double> v = ed::parse_value_list(text);
  if (v.size() != 1)
    throw ed::Error(std::string(who) + ": expected a single value");
  return v[0];
}

RunConfig load_run_config(const ed::KeyValueConfig& kv) {
  reject_unknown_keys(kv);
  if (kv.count("j") && kv.count("delta_j"))
    throw ed::Error("config: give either j or delta_j, not both");
  RunConfig rc;
  if (auto it = kv.find("nu"); it != kv.end())
    rc.nu = parse_single(it->second, "config nu");
  if (auto it = kv.find("tau_plus"); it != kv.end())
    rc.tau_plus = parse_single(it->second, "config tau_plus");
  if (auto it = kv.find("c0"); it != kv.end())
    rc.c0 = parse_single(it->second, "config c0");
  if (auto it = kv.find("j"); it != kv.end())
    rc.j = parse_single(it->second, "config j");
  if (auto it = kv.find("delta_j"); it != kv.end())
    rc.delta_j = parse_single(it->second, "config delta_j");
  if (auto it = kv.find("grid_n"); it != kv.end())
    rc.grid_n = parse_int(it->second, "config grid_n");
  if (auto it = kv.find("n_max"); it != kv.end())
    rc.n_max = parse_int(it->second, "config n_max");
  return rc;
}

SweepSpec load_sweep_spec(const ed::KeyValueConfig& kv) {
  reject_unknown_keys(kv);
  if (kv.count("j") && kv.count("delta_j"))
    throw ed::Error("config: give either j or delta_j, not both");
  SweepSpec sp;
  if (auto it = kv.find("nu"); it != kv.end())
    sp.nu = ed::parse_value_list(it->second);
  if (auto it = kv.find("tau_plus"); it != kv.end())
    sp.tau_plus = ed::parse_value_list(it->second);
  if (auto it = kv.find("c0"); it != kv.end())
    sp.c0 = ed::parse_value_list(it->second);
  if (auto it = kv.find("j"); it != kv.end()) {
    sp.current = ed::parse_value_list(it->second);
    sp.current_is_j = true;
  }
  if (auto it = kv.find("delta_j"); it != kv.end())
    sp.current = ed::parse_value_list(it->second);
  if (auto it = kv.find("grid_n"); it != kv.end())
    sp.grid_n = parse_int(it->second, "config grid_n");
  if (auto it = kv.find("n_max"); it != kv.end())
    sp.n_max = parse_int(it->second, "config n_max");
  return sp;
}

ed::ModelParams params_from(const RunConfig& rc) {
  if (rc.j) return ed::validate_params(rc.nu, rc.tau_plus, rc.c0, *rc.j);
  return ed::params_with_delta_j(rc.nu, rc.tau_plus, rc.c0,
                                 rc.delta_j.value_or(0.0));
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

fs::path resolve_out_dir(const std::string& flag_value) {
  std::string dir = flag_value;
  if (dir.empty())
    if (const char* env = std::getenv("EDJ_OUT_DIR")) dir = env;
  if (dir.empty()) dir = ".";
  fs::path p(dir);
  fs::create_directories(p);
  return p;
}

struct Formats {
  bool csv = false;
  bool json = false;
};

Formats parse_formats(const std::string& text) {
  Formats f;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "csv")
      f.csv = true;
    else if (tok == "json")
      f.json = true;
    else if (!tok.empty())
      throw ed::Error("--formats: unknown format '" + tok +
                      "' (expected csv and/or json)");
  }
  if (!f.csv && !f.json) throw ed::Error("--formats: no formats selected");
  return f;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ed::Error("cannot open for writing: " + path.string());
  os << content;
  if (!os) throw ed::Error("write failed: " + path.string());
}

ordered_json params_json(const ed::ModelParams& p) {
  return {{"nu", p.nu},       {"tau_plus", p.tau_plus}, {"c0", p.c0},
          {"j", p.j},         {"j0", p.j0},             {"delta_j", p.delta_j}};
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Exceptions must be
// handled inside fn; results must be written to per-index slots so the final
// output order is independent of scheduling.
template <typename F>
void parallel_for(int count, int jobs, F&& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&next, count, &fn] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_solve(const std::string& config_path, const std::string& out_flag,
              int grid_n_flag, const std::string& formats_text,
              bool no_extrapolate) {
  RunConfig rc = load_run_config(ed::parse_config_file(config_path));
  if (grid_n_flag > 0) rc.grid_n = grid_n_flag;
  const Formats formats = parse_formats(formats_text);
  const fs::path out = resolve_out_dir(out_flag);

  const ed::ModelParams p = params_from(rc);
  const ed::Grid g(rc.grid_n);
  ed::RefOptions opts;
  opts.extrapolate = !no_extrapolate;
  const ed::RefSolution ref = ed::solve_reference(p, g, opts);

  if (formats.csv) {
    std::ostringstream ss;
    ed::write_solution_csv(ss, ref.field);
    write_text_file(out / "solution.csv", ss.str());
    std::cout << "wrote " << (out / "solution.csv").string() << "\n";
  }
  if (formats.json) {
    ordered_json j;
    j["params"] = params_json(p);
    j["grid_n"] = rc.grid_n;
    j["class"] = std::string(1, ed::to_char(ref.field.class_label));
    j["nu_e_max_sq"] = ref.field.nu_e_max_sq;
    j["phi_plus"] = ref.field.phi_plus;
    j["phi_minus"] = ref.field.phi_minus;
    j["positivity_warning"] = ref.field.positivity_warning;
    j["newton_iterations"] = ref.newton_iterations;
    j["final_residual_norm"] = ref.final_residual_norm;
    j["continuation_steps"] = ref.continuation_steps;
    write_text_file(out / "solution.json", j.dump(2) + "\n");
    std::cout << "wrote " << (out / "solution.json").string() << "\n";
  }

  std::cout << "class=" << ed::to_char(ref.field.class_label)
            << " nu_e_max_sq=" << ed::format_double(ref.field.nu_e_max_sq)
            << " phi_plus=" << ed::format_double(ref.field.phi_plus)
            << " phi_minus=" << ed::format_double(ref.field.phi_minus)
            << " newton_iterations=" << ref.newton_iterations << "\n";
  return 0;
}

int cmd_series(const std::string& config_path, const std::string& out_flag,
               int grid_n_flag, int n_max_flag,
               const std::string& formats_text,
               const std::vector<int>& snapshots) {
  RunConfig rc = load_run_config(ed::parse_config_file(config_path));
  if (grid_n_flag > 0) rc.grid_n = grid_n_flag;
  if (n_max_flag > 0) rc.n_max = n_max_flag;
  const Formats formats = parse_formats(formats_text);
  const fs::path out = resolve_out_dir(out_flag);

  const ed::ModelParams p = params_from(rc);
  const ed::Grid g(rc.grid_n);
  const ed::AiryBasis basis(p, g);
  const ed::SeriesRun run = ed::run_series(p, rc.n_max, basis);

  if (formats.csv) {
    std::ostringstream ss;
    ss << "n,max_abs_E,u0,u1\n";
    for (int n = 1; n <= run.status.n_reached; ++n) {
      const ed::SeriesTerm& t = run.term(n);
      ss << n << ',' << ed::format_double(t.max_abs) << ','
         << ed::format_double(t.u0) << ',' << ed::format_double(t.u1) << "\n";
    }
    write_text_file(out / "series.csv", ss.str());
    std::cout << "wrote " << (out / "series.csv").string() << "\n";
  }
  if (formats.json) {
    ordered_json j;
    j["params"] = params_json(p);
    j["grid_n"] = rc.grid_n;
    j["n_max"] = rc.n_max;
    j["n_reached"] = run.status.n_reached;
    j["overflow"] = run.status.overflow;
    j["overflow_order"] = run.status.overflow_order;
    write_text_file(out / "series.json", j.dump(2) + "\n");
    std::cout << "wrote " << (out / "series.json").string() << "\n";
  }

  for (int k : snapshots) {
    const ed::FieldSolution snap = ed::partial_sum_solution(run, k);
    std::ostringstream ss;
    ed::write_solution_csv(ss, snap);
    const fs::path path = out / ("solution_n" + std::to_string(k) + ".csv");
    write_text_file(path, ss.str());
    std::cout << "wrote " << path.string() << "\n";
  }

  std::cout << "n_reached=" << run.status.n_reached
            << " overflow=" << (run.status.overflow ? "yes" : "no")
            << " max_abs_E1="
            << ed::format_double(run.term(1).max_abs) << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_flag,
              int grid_n_flag, int n_max_flag,
              const std::string& formats_text, int jobs,
              bool no_extrapolate) {
  SweepSpec sp = load_sweep_spec(ed::parse_config_file(config_path));
  if (grid_n_flag > 0) sp.grid_n = grid_n_flag;
  if (n_max_flag > 0) sp.n_max = n_max_flag;
  const Formats formats = parse_formats(formats_text);
  const fs::path out = resolve_out_dir(out_flag);

  struct Case {
    ed::ModelParams params;
    std::string error;  // nonempty if parameter validation failed
  };
  std::vector<Case> cases;
  for (double nu : sp.nu)
    for (double tp : sp.tau_plus)
      for (double c0 : sp.c0)
        for (double cur : sp.current) {
          Case c;
          try {
            c.params = sp.current_is_j
                           ? ed::validate_params(nu, tp, c0, cur)
                           : ed::params_with_delta_j(nu, tp, c0, cur);
          } catch (const std::exception& e) {
            c.params = ed::detail::make_params_unchecked(nu, tp, c0, cur);
            c.error = e.what();
          }
          cases.push_back(c);
        }

  std::cout << "sweep: " << cases.size() << " cases, grid_n=" << sp.grid_n
            << ", n_max=" << sp.n_max << ", jobs=" << std::max(1, jobs)
            << "\n";

  const ed::Grid g(sp.grid_n);
  ed::RefOptions opts;
  opts.extrapolate = !no_extrapolate;

  struct Outcome {
    std::string report_line;
    std::string trace_csv;
    bool failed = false;
  };
  std::vector<Outcome> outcomes(cases.size());

  parallel_for(static_cast<int>(cases.size()), jobs, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    Outcome& o = outcomes[k];
    const Case& c = cases[k];
    if (!c.error.empty()) {
      ordered_json j;
      j["params"] = params_json(c.params);
      j["error"] = c.error;
      o.report_line = j.dump();
      o.failed = true;
      return;
    }
    try {
      const ed::CaseResult r = ed::run_case(c.params, g, sp.n_max, opts);
      o.report_line = ed::case_report_json(r);
      if (formats.csv) {
        std::ostringstream ss;
        ed::write_trace_csv(ss, r.trace);
        o.trace_csv = ss.str();
      }
    } catch (const std::exception& e) {
      ordered_json j;
      j["params"] = params_json(c.params);
      j["error"] = e.what();
      o.report_line = j.dump();
      o.failed = true;
    }
  });

  std::string jsonl;
  bool any_failed = false;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    jsonl += outcomes[k].report_line;
    jsonl += "\n";
    any_failed = any_failed || outcomes[k].failed;
    if (!outcomes[k].trace_csv.empty()) {
      const fs::path path =
          out / ("case_" + std::to_string(k) + "_trace.csv");
      write_text_file(path, outcomes[k].trace_csv);
    }
  }
  write_text_file(out / "sweep.jsonl", jsonl);
  std::cout << "wrote " << (out / "sweep.jsonl").string() << "\n";
  if (any_failed) {
    std::cerr << "sweep: some cases failed (see sweep.jsonl)\n";
    return 1;
  }
  return 0;
}

int cmd_table1(const std::string& out_flag, int grid_n, int n_max, int jobs,
               bool no_extrapolate) {
  // The six benchmark rows (tau_plus = 0.6, c0 = 1/3) with their published
  // reference values.
  struct Row {
    double nu, delta_j;
    char cls;
    double nu_e_max_sq, delta_1;
    int n3, n7;
  };
  const std::vector<Row> rows = {
      {0.1, -0.5, 'B', 0.13, 0.013, 2, 7},
      {0.5, 1.5, 'A', 5.2, 0.13, 6, 21},
      {1.1, -1.0, 'B', 4.5, 0.049, 4, 11},
      {2.5, -2.0, 'B', 38.0, 0.16, 11, 42},
      {3.5, 2.0, 'A', 61.0, 0.17, 10, 43},
      {10.0, 1.0, 'A', 42.0, 0.044, 3, 12},
  };

  const fs::path out = resolve_out_dir(out_flag);
  const ed::Grid g(grid_n);
  ed::RefOptions opts;
  opts.extrapolate = !no_extrapolate;

  std::vector<ed::CaseResult> results(rows.size());
  std::vector<std::string> errors(rows.size());
  parallel_for(static_cast<int>(rows.size()), jobs, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      const ed::ModelParams p =
          ed::params_with_delta_j(rows[k].nu, 0.6, 1.0 / 3.0, rows[k].delta_j);
      results[k] = ed::run_case(p, g, n_max, opts);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });

  auto opt_str = [](const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string("-");
  };

  std::printf("%6s %8s | %5s %5s | %12s %12s | %9s %9s | %7s %7s | %7s %7s\n",
              "nu", "delta_j", "cls", "cls*", "nuE2max", "nuE2max*",
              "delta_1", "delta_1*", "n3", "n3*", "n7", "n7*");
  ordered_json report = ordered_json::array();
  bool any_failed = false;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& row = rows[k];
    if (!errors[k].empty()) {
      std::printf("%6.2f %8.2f | case failed: %s\n", row.nu, row.delta_j,
                  errors[k].c_str());
      any_failed = true;
      continue;
    }
    const ed::CaseResult& r = results[k];
    std::printf(
        "%6.2f %8.2f | %5c %5c | %12.4g %12.4g | %9.3g %9.3g | %7d %7s | %7d "
        "%7s\n",
        row.nu, row.delta_j, row.cls,
        ed::to_char(r.ref.field.class_label), row.nu_e_max_sq,
        r.trace.nu_e_max_sq, row.delta_1, r.trace.delta_1, row.n3,
        opt_str(r.trace.n3).c_str(), row.n7, opt_str(r.trace.n7).c_str());
    ordered_json entry;
    entry["reference"] = {{"class", std::string(1, row.cls)},
                          {"nu_e_max_sq", row.nu_e_max_sq},
                          {"delta_1", row.delta_1},
                          {"n3", row.n3},
                          {"n7", row.n7}};
    entry["computed"] = ordered_json::parse(ed::case_report_json(r));
    report.push_back(entry);
  }
  write_text_file(out / "table1.json", report.dump(2) + "\n");
  std::cout << "wrote " << (out / "table1.json").string() << "\n";
  return any_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Two-ion junction model: reference BVP solver, perturbation series, "
      "and convergence analysis"};
  app.require_subcommand(1);

  std::string config_path, out_dir, formats = "csv,json";
  int grid_n = 0, n_max = 0, jobs = 1;
  bool no_extrapolate = false;
  std::vector<int> snapshots;

  CLI::App* solve = app.add_subcommand(
      "solve", "Reference solve of the junction boundary-value problem");
  solve->add_option("--config", config_path, "Key-value config file")
      ->required();
  solve->add_option("--out", out_dir,
                    "Output directory (default: $EDJ_OUT_DIR or .)");
  solve->add_option("--grid-n", grid_n, "Override grid interval count");
  solve->add_option("--formats", formats, "Comma list of csv,json");
  solve->add_flag("--no-extrapolate", no_extrapolate,
                  "Solve the requested grid directly (skip refinement)");

  CLI::App* series = app.add_subcommand(
      "series", "Run the perturbation series for one parameter set");
  series->add_option("--config", config_path, "Key-value config file")
      ->required();
  series->add_option("--out", out_dir,
                     "Output directory (default: $EDJ_OUT_DIR or .)");
  series->add_option("--grid-n", grid_n, "Override grid interval count");
  series->add_option("--n-max", n_max, "Override order horizon");
  series->add_option("--formats", formats, "Comma list of csv,json");
  series->add_option("--snapshots", snapshots,
                     "Orders at which to write partial-sum solutions")
      ->delimiter(',');

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Full pipeline over a parameter cross-product");
  sweep->add_option("--config", config_path, "Key-value config file")
      ->required();
  sweep->add_option("--out", out_dir,
                    "Output directory (default: $EDJ_OUT_DIR or .)");
  sweep->add_option("--grid-n", grid_n, "Override grid interval count");
  sweep->add_option("--n-max", n_max, "Override order horizon");
  sweep->add_option("--formats", formats, "Comma list of csv,json");
  sweep->add_option("--jobs", jobs, "Worker threads");
  sweep->add_flag("--no-extrapolate", no_extrapolate,
                  "Solve the requested grid directly (skip refinement)");

  CLI::App* table1 = app.add_subcommand(
      "table1", "Re-verify the six built-in benchmark cases");
  table1->add_option("--out", out_dir,
                     "Output directory (default: $EDJ_OUT_DIR or .)");
  int t1_grid_n = 1000, t1_n_max = 80;
  table1->add_option("--grid-n", t1_grid_n, "Grid interval count");
  table1->add_option("--n-max", t1_n_max, "Order horizon");
  table1->add_option("--jobs", jobs, "Worker threads");
  table1->add_flag("--no-extrapolate", no_extrapolate,
                   "Solve the requested grid directly (skip refinement)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return cmd_solve(config_path, out_dir, grid_n, formats, no_extrapolate);
    if (series->parsed())
      return cmd_series(config_path, out_dir, grid_n, n_max, formats,
                        snapshots);
    if (sweep->parsed())
      return cmd_sweep(config_path, out_dir, grid_n, n_max, formats, jobs,
                       no_extrapolate);
    if (table1->parsed())
      return cmd_table1(out_dir, t1_grid_n, t1_n_max, jobs, no_extrapolate);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
