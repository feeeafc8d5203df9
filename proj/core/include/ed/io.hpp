#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ed/pipeline.hpp"
#include "ed/solution.hpp"

namespace ed {

/// Formats a double with 17 significant digits (shortest round-trip-safe
/// form), keeping regression diffs meaningful.
std::string format_double(double v);

/// Flat key-value configuration: one `key = value` pair per line, `#`
/// comments, blank lines ignored. Values keep inner whitespace; keys and
/// values are trimmed. Duplicate keys: last one wins.
using KeyValueConfig = std::map<std::string, std::string>;

KeyValueConfig parse_config_text(const std::string& text);
KeyValueConfig parse_config_file(const std::string& path);

/// Parses a numeric list: comma-separated values ("0.1,0.5,1"), a range
/// "start:step:stop" (inclusive of stop within half-step tolerance), or a
/// single number. Throws DomainError on malformed input.
std::vector<double> parse_value_list(const std::string& text);

/// Writes a solution as CSV with a JSON header line:
///   # {"nu":...,"tau_plus":...,"c0":...,"j":...,"phi_plus":...,
///      "phi_minus":...,"class":"B","nu_e_max_sq":...}
///   x,E,dE,c_plus,c_minus
///   ...
void write_solution_csv(std::ostream& os, const FieldSolution& s);

/// Reads back a solution CSV written by write_solution_csv (grid inferred
/// from the row count). Throws Error on malformed input.
FieldSolution read_solution_csv(std::istream& is);

/// Writes the per-order error trace as CSV:
///   n,delta0,delta1,delta_half,delta_bar,unreliable
void write_trace_csv(std::ostream& os, const ErrorTrace& t);

/// Serializes the full per-case report as deterministic JSON (insertion-
/// ordered keys, 17-significant-digit numbers):
///   {params, class, nu_e_max_sq, delta_1, n3, n7, verdict, condition_q,
///    monotone_weights, ...}
std::string case_report_json(const CaseResult& r);

}  // namespace ed
