#pragma once

#include "cvxenv/sequences.hpp"

#include <filesystem>
#include <string>
#include <utility>

namespace cvxenv {

inline constexpr const char* tool_version = "cvxenv 0.1.0";

// Shortest decimal form that parses back to the same bits; infinities become
// "inf" / "-inf".
std::string format_double(double v);

// Inverse of format_double; accepts the infinity sentinels.
double parse_double_token(const std::string& token);

// --- JSON documents ----------------------------------------------------------
// Field names are part of the file contract:
//   domain    {dimension, vertices, metric_p, resolution}
//   function  {domain_ref, values, class_tag}
//   measures  [{support: [[coords...]], weights: [...]}, ...]
//   scenario  {domain, measures, eps, delta, compacts: [[indices...]], x0, N_terms}
// +inf is written as the string "inf" wherever a number may be infinite
// (function values, metric_p). Parse and field errors surface as
// std::runtime_error naming the offending field; syntax errors keep the
// underlying line/column diagnostics.

// Lattice domains only (the resolution spec cannot describe explicit grids).
std::string domain_to_json(const ConvexDomain& domain);
std::shared_ptr<const ConvexDomain> domain_from_json(const std::string& text);

std::string function_to_json(const GridFunction& f);
GridFunction function_from_json(const std::string& text);

// Support points are written as coordinates and mapped back through exact
// grid lookup; a point off the grid is an error.
std::string measures_to_json(const ConvexDomain& domain,
                             const std::vector<FiniteMeasure>& family);
std::vector<FiniteMeasure> measures_from_json(std::shared_ptr<const ConvexDomain> domain,
                                              const std::string& text);

std::string scenario_to_json(const ProofTraceScenario& scenario, int n_terms);
std::pair<ProofTraceScenario, int> scenario_from_json(const std::string& text);

// --- files -------------------------------------------------------------------

std::string read_text(const std::filesystem::path& path);

// Writes to a temp file in the target directory, then renames over the
// destination, so readers never observe partial content.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace cvxenv
