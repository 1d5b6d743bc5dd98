#pragma once

#include "cvxenv/fixtures.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace cvxenv {

inline constexpr int exit_pass = 0;          // verdict holds
inline constexpr int exit_error = 1;         // input or solver problem
inline constexpr int exit_theorem_fail = 2;  // verdict check failed

struct RunConfig {
    // conjugate | envelope | hull | converge | decrease | trace | tightness | regularize
    std::string command;
    std::string fixture;      // built-in input, see fixture_names()
    std::string config_path;  // JSON input file (function or scenario document, by command)
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    double tol_env = tol_env_default;
    int resolution = 0;  // 0 keeps each fixture's default geometry
};

// Executes the command and writes <command>.csv plus summary.json into
// out_dir (created if missing). Returns exit_pass, exit_theorem_fail when a
// verdict check fails, or exit_error with diagnostics on err.
int run(const RunConfig& config, std::ostream& err);

}  // namespace cvxenv
