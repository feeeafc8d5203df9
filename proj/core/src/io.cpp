#include "ed/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ed/errors.hpp"

namespace ed {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const char* who) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw DomainError(std::string(who) + ": not a number: '" + t + "'");
  }
  if (used != t.size())
    throw DomainError(std::string(who) + ": trailing junk in number: '" + t +
                      "'");
  return v;
}

SolutionClass class_from_string(const std::string& s) {
  if (s == "A") return SolutionClass::A;
  if (s == "B") return SolutionClass::B;
  if (s == "C") return SolutionClass::C;
  return SolutionClass::Unclassified;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

KeyValueConfig parse_config_text(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(line_no) +
                  ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw Error("config line " + std::to_string(line_no) + ": empty key");
    cfg[key] = value;  // duplicate keys: last one wins
  }
  return cfg;
}

KeyValueConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<double> parse_value_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw DomainError("parse_value_list: empty input");

  if (t.find(':') != std::string::npos) {
    // start:step:stop, inclusive of stop within half a step.
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      const auto c = t.find(':', pos);
      if (c == std::string::npos) {
        parts.push_back(t.substr(pos));
        break;
      }
      parts.push_back(t.substr(pos, c - pos));
      pos = c + 1;
    }
    if (parts.size() != 3)
      throw DomainError("parse_value_list: range must be start:step:stop");
    const double start = parse_double(parts[0], "parse_value_list");
    const double step = parse_double(parts[1], "parse_value_list");
    const double stop = parse_double(parts[2], "parse_value_list");
    if (step == 0.0 || !std::isfinite(step))
      throw DomainError("parse_value_list: zero or non-finite step");
    if ((stop - start) / step < 0.0)
      throw DomainError("parse_value_list: step points away from stop");
    std::vector<double> out;
    const double lim = std::fabs(step) * 0.5;
    for (int i = 0;; ++i) {
      const double v = start + i * step;
      if ((step > 0.0 && v > stop + lim) || (step < 0.0 && v < stop - lim))
        break;
      out.push_back(v);
      if (out.size() > 1000000)
        throw DomainError("parse_value_list: range produces too many values");
    }
    return out;
  }

  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const auto c = t.find(',', pos);
    const std::string tok =
        c == std::string::npos ? t.substr(pos) : t.substr(pos, c - pos);
    out.push_back(parse_double(tok, "parse_value_list"));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  return out;
}

void write_solution_csv(std::ostream& os, const FieldSolution& s) {
  ordered_json hdr;
  hdr["nu"] = s.params.nu;
  hdr["tau_plus"] = s.params.tau_plus;
  hdr["c0"] = s.params.c0;
  hdr["j"] = s.params.j;
  hdr["phi_plus"] = s.phi_plus;
  hdr["phi_minus"] = s.phi_minus;
  hdr["class"] = std::string(1, to_char(s.class_label));
  hdr["nu_e_max_sq"] = s.nu_e_max_sq;
  os << "# " << hdr.dump() << "\n";
  os << "x,E,dE,c_plus,c_minus\n";
  const Grid& g = s.E.grid;
  for (int i = 0; i < g.node_count(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    os << format_double(g.node(i)) << ',' << format_double(s.E.values[k])
       << ',' << format_double(s.E.derivatives[k]) << ','
       << format_double(s.c_plus.values[k]) << ','
       << format_double(s.c_minus.values[k]) << "\n";
  }
}

FieldSolution read_solution_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.size() < 2 || line[0] != '#')
    throw Error("solution CSV: missing JSON header line");
  ordered_json hdr;
  try {
    hdr = ordered_json::parse(line.substr(1));
  } catch (const std::exception& e) {
    throw Error(std::string("solution CSV: bad JSON header: ") + e.what());
  }
  if (!std::getline(is, line) || trim(line) != "x,E,dE,c_plus,c_minus")
    throw Error("solution CSV: missing column header");

  std::vector<double> e, de, cp, cm;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const auto c = t.find(',', pos);
      if (c == std::string::npos) {
        cells.push_back(t.substr(pos));
        break;
      }
      cells.push_back(t.substr(pos, c - pos));
      pos = c + 1;
    }
    if (cells.size() != 5)
      throw Error("solution CSV: expected 5 columns, got " +
                  std::to_string(cells.size()));
    e.push_back(parse_double(cells[1], "solution CSV"));
    de.push_back(parse_double(cells[2], "solution CSV"));
    cp.push_back(parse_double(cells[3], "solution CSV"));
    cm.push_back(parse_double(cells[4], "solution CSV"));
  }
  if (e.size() < 2 || e.size() % 2 != 1)
    throw Error("solution CSV: node count must be odd (even interval count)");

  const Grid g(static_cast<int>(e.size()) - 1);
  FieldSolution s;
  try {
    s.params = validate_params(hdr.at("nu").get<double>(),
                               hdr.at("tau_plus").get<double>(),
                               hdr.at("c0").get<double>(),
                               hdr.at("j").get<double>());
    s.phi_plus = hdr.at("phi_plus").get<double>();
    s.phi_minus = hdr.at("phi_minus").get<double>();
    s.class_label = class_from_string(hdr.at("class").get<std::string>());
    s.nu_e_max_sq = hdr.at("nu_e_max_sq").get<double>();
  } catch (const ordered_json::exception& ex) {
    throw Error(std::string("solution CSV: bad header: ") + ex.what());
  }
  s.E = GridFn(g, e, de);
  s.c_plus = GridFn(g, cp);
  s.c_minus = GridFn(g, cm);
  for (std::size_t i = 0; i < cp.size(); ++i)
    if (cp[i] <= 0.0 || cm[i] <= 0.0) s.positivity_warning = true;
  return s;
}

void write_trace_csv(std::ostream& os, const ErrorTrace& t) {
  os << "n,delta0,delta1,delta_half,delta_bar,unreliable\n";
  for (int n = 1; n <= t.n_max; ++n) {
    const auto k = static_cast<std::size_t>(n);
    os << n << ',' << format_double(t.delta0[k]) << ','
       << format_double(t.delta1[k]) << ',' << format_double(t.delta_half[k])
       << ',' << format_double(t.delta_bar[k]) << ','
       << static_cast<int>(t.unreliable[k]) << "\n";
  }
}

std::string case_report_json(const CaseResult& r) {
  ordered_json j;
  j["params"] = {{"nu", r.params.nu},
                 {"tau_plus", r.params.tau_plus},
                 {"c0", r.params.c0},
                 {"j", r.params.j},
                 {"j0", r.params.j0},
                 {"delta_j", r.params.delta_j}};
  j["grid_n"] = r.grid.n_intervals();
  j["n_max"] = r.n_max;
  j["n_reached"] = r.run.status.n_reached;
  j["overflow"] = r.run.status.overflow;
  j["class"] = std::string(1, to_char(r.ref.field.class_label));
  j["nu_e_max_sq"] = r.trace.nu_e_max_sq;
  j["delta_1"] = r.trace.delta_1;
  if (r.trace.n3)
    j["n3"] = *r.trace.n3;
  else
    j["n3"] = nullptr;
  if (r.trace.n7)
    j["n7"] = *r.trace.n7;
  else
    j["n7"] = nullptr;
  j["verdict"] = to_string(r.trace.verdict_label);
  j["condition_q"] = {{"n_low", r.q.n_low},
                      {"n_high", r.q.n_high},
                      {"holds", r.q.holds},
                      {"violations", r.q.violations}};
  j["monotone_weights"] = r.weights.monotone_weights;
  j["conjecture_flag"] = r.weights.conjecture_flag;
  j["reference"] = {{"newton_iterations", r.ref.newton_iterations},
                    {"final_residual_norm", r.ref.final_residual_norm},
                    {"continuation_steps", r.ref.continuation_steps},
                    {"phi_plus", r.ref.field.phi_plus},
                    {"phi_minus", r.ref.field.phi_minus},
                    {"positivity_warning", r.ref.field.positivity_warning}};
  return j.dump();
}

}  // namespace ed
