#include <CLI11.hpp>

#include <iostream>

#include "cvxenv/io.hpp"
#include "cvxenv/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{std::string(cvxenv::tool_version) +
                 " — convex closures, hulls, and convergence checks on polytope grids"};
    cvxenv::RunConfig cfg;
    app.add_option("command", cfg.command,
                   "conjugate | envelope | hull | converge | decrease | trace | tightness | "
                   "regularize")
        ->required();
    app.add_option("--fixture", cfg.fixture, "built-in fixture name (see README)");
    app.add_option("--config", cfg.config_path, "JSON input document");
    app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for random fixtures")->capture_default_str();
    app.add_option("--tol-env", cfg.tol_env, "envelope tolerance")->capture_default_str();
    app.add_option("--resolution", cfg.resolution, "grid resolution override (0 = default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cvxenv::exit_error;
    }

    return cvxenv::run(cfg, std::cerr);
}
