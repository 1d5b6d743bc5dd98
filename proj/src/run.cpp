#include "cvxenv/run.hpp"

#include "cvxenv/envelopes.hpp"
#include "cvxenv/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

namespace cvxenv {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double conv_tol_default = 1e-6;
constexpr double margin_min = 1e-6;
constexpr double lp_feas_tol = 1e-9;  // mirrors SimplexOptions.feas_tol
constexpr double order_tol = 1e-12;   // sequence ordering slack

json to_jnum(double v) {
    if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
    return json(v);
}

struct SlopeMeta {
    int count = 0;
    double max_step = 0.0;
    double lipschitz = 0.0;
    double tol_equiv = 0.0;
};

// Shared context for one command run: input description, target domain, and
// the artifact sinks.
struct Emitter {
    const RunConfig& cfg;
    std::string input;
    const ConvexDomain* domain = nullptr;
    std::optional<SlopeMeta> slope;
    std::ostringstream csv;
    json summary = json::object();

    void write_meta() {
        csv << "# tool: " << tool_version << "\n"
            << "# command: " << cfg.command << "\n"
            << "# input: " << input << "\n"
            << "# seed: " << cfg.seed << "\n"
            << "# grid_spacing: " << format_double(domain->spacing()) << "\n"
            << "# tol_geom: " << format_double(ConvexDomain::tol_geom) << "\n"
            << "# tol_env: " << format_double(cfg.tol_env) << "\n"
            << "# conv_tol: " << format_double(conv_tol_default) << "\n"
            << "# margin_min: " << format_double(margin_min) << "\n"
            << "# lp_feas_tol: " << format_double(lp_feas_tol) << "\n"
            << "# order_tol: " << format_double(order_tol) << "\n";
        if (slope)
            csv << "# slope_count: " << slope->count << "\n"
                << "# slope_max_step: " << format_double(slope->max_step) << "\n"
                << "# slope_lipschitz: " << format_double(slope->lipschitz) << "\n"
                << "# tol_equiv: " << format_double(slope->tol_equiv) << "\n";

        json tolerances;
        tolerances["tol_geom"] = to_jnum(ConvexDomain::tol_geom);
        tolerances["tol_env"] = to_jnum(cfg.tol_env);
        tolerances["conv_tol"] = to_jnum(conv_tol_default);
        tolerances["margin_min"] = to_jnum(margin_min);
        tolerances["lp_feas_tol"] = to_jnum(lp_feas_tol);
        tolerances["order_tol"] = to_jnum(order_tol);
        json meta;
        meta["tool"] = tool_version;
        meta["input"] = input;
        meta["seed"] = cfg.seed;
        meta["grid_spacing"] = to_jnum(domain->spacing());
        meta["tolerances"] = tolerances;
        if (slope) {
            json sg;
            sg["count"] = slope->count;
            sg["max_step"] = to_jnum(slope->max_step);
            sg["lipschitz"] = to_jnum(slope->lipschitz);
            sg["tol_equiv"] = to_jnum(slope->tol_equiv);
            meta["slope_grid"] = sg;
        }
        summary["meta"] = meta;
    }

    int finish(bool pass) {
        summary["command"] = cfg.command;
        summary["verdict"] = pass ? "pass" : "fail";
        fs::path dir(cfg.out_dir);
        fs::create_directories(dir);
        write_text_atomic(dir / (cfg.command + ".csv"), csv.str());
        write_text_atomic(dir / "summary.json", summary.dump(2) + "\n");
        return pass ? exit_pass : exit_theorem_fail;
    }
};

std::string coord_header(int dimension) {
    std::string h;
    for (int a = 0; a < dimension; ++a) h += "x" + std::to_string(a) + ",";
    return h;
}

void write_point(std::ostringstream& os, const Point& p) {
    for (double c : p) os << format_double(c) << ",";
}

GridFunction input_function(const RunConfig& cfg, const Fixture* fx) {
    if (!cfg.config_path.empty()) return function_from_json(read_text(cfg.config_path));
    if (!fx->function)
        throw std::runtime_error("fixture '" + cfg.fixture + "' carries no function for '" +
                                 cfg.command + "'");
    return *fx->function;
}

std::vector<Point> all_nodes(const ConvexDomain& domain) { return domain.grid(); }

int run_conjugate(const RunConfig&, Emitter& em, const GridFunction& f) {
    SlopeGrid S = default_slope_grid(f);
    ConjugateTable table = fenchel_conjugate(f, S);
    em.slope = SlopeMeta{S.size(), S.max_step, S.lipschitz_estimate,
                         equivalence_tolerance(S, f.domain())};
    em.write_meta();
    std::string hdr;
    for (int a = 0; a < f.domain().dimension(); ++a) hdr += "s" + std::to_string(a) + ",";
    em.csv << hdr << "fstar\n";
    for (int j = 0; j < table.size(); ++j) {
        write_point(em.csv, S.slopes[j]);
        em.csv << format_double(table.value_at(j)) << "\n";
    }
    em.summary["slopes"] = table.size();
    return em.finish(true);
}

int run_envelope(const RunConfig& cfg, Emitter& em, const GridFunction& f) {
    const ConvexDomain& dom = f.domain();
    SlopeGrid S = default_slope_grid(f);
    double tol_equiv = equivalence_tolerance(S, dom);
    em.slope = SlopeMeta{S.size(), S.max_step, S.lipschitz_estimate, tol_equiv};
    em.write_meta();

    GridFunction closure = biconjugate(fenchel_conjugate(f, S));
    GridFunction hull = convex_hull_fn(f);
    em.csv << coord_header(dom.dimension()) << "f,hull,closure,gap\n";
    double max_abs_gap = 0.0;
    for (int i = 0; i < dom.grid_size(); ++i) {
        double gap = hull.value(i) - closure.value(i);
        max_abs_gap = std::max(max_abs_gap, std::abs(gap));
        write_point(em.csv, dom.grid_point(i));
        em.csv << format_double(f.value(i)) << "," << format_double(hull.value(i)) << ","
               << format_double(closure.value(i)) << "," << format_double(gap) << "\n";
    }
    em.summary["nodes"] = dom.grid_size();
    em.summary["max_abs_gap"] = to_jnum(max_abs_gap);
    em.summary["tol_equiv"] = to_jnum(tol_equiv);
    double threshold = tol_equiv + cfg.tol_env;
    em.summary["threshold"] = to_jnum(threshold);
    return em.finish(max_abs_gap <= threshold);
}

int run_hull(const RunConfig&, Emitter& em, const GridFunction& f) {
    const ConvexDomain& dom = f.domain();
    em.write_meta();
    GridFunction hull = convex_hull_fn(f);
    em.csv << coord_header(dom.dimension()) << "f,hull\n";
    double max_drop = 0.0;
    for (int i = 0; i < dom.grid_size(); ++i) {
        if (f.finite_at(i)) max_drop = std::max(max_drop, f.value(i) - hull.value(i));
        write_point(em.csv, dom.grid_point(i));
        em.csv << format_double(f.value(i)) << "," << format_double(hull.value(i)) << "\n";
    }
    em.summary["nodes"] = dom.grid_size();
    em.summary["max_drop"] = to_jnum(max_drop);
    return em.finish(true);
}

int run_harness_command(const RunConfig& cfg, Emitter& em, const FunctionSequence& seq) {
    const ConvexDomain& dom = seq.limit.domain();
    ConvergenceReport rep =
        cfg.command == "decrease"
            ? run_decreasing_harness(seq, all_nodes(dom), conv_tol_default)
            : run_convergence_harness(seq, EnvelopeKind::closure, all_nodes(dom),
                                      conv_tol_default);
    if (rep.slope_count > 0)
        em.slope = SlopeMeta{rep.slope_count, rep.slope_max_step, rep.slope_lipschitz,
                             rep.discretization_tol};
    em.write_meta();

    int terms = static_cast<int>(seq.terms.size());
    em.csv << coord_header(dom.dimension()) << "env_limit,";
    for (int n = 1; n <= terms; ++n) em.csv << "env_term_" << n << ",";
    em.csv << "final_gap\n";
    for (const ProbeRow& row : rep.rows) {
        write_point(em.csv, row.probe);
        em.csv << format_double(row.envelope_limit) << ",";
        for (double v : row.envelope_per_term) em.csv << format_double(v) << ",";
        em.csv << format_double(row.final_gap) << "\n";
    }

    em.summary["kind"] = to_string(rep.kind);
    em.summary["direction"] = to_string(rep.direction);
    em.summary["conv_tol"] = to_jnum(rep.conv_tol);
    em.summary["discretization_tol"] = to_jnum(rep.discretization_tol);
    em.summary["threshold"] = to_jnum(rep.threshold);
    em.summary["tail_gap"] = to_jnum(rep.tail_gap);
    em.summary["max_final_gap"] = to_jnum(rep.max_final_gap);
    em.summary["monotonicity_violations"] = rep.monotonicity_violations;
    em.summary["negativity_violations"] = rep.negativity_violations;
    em.summary["converged"] = rep.converged;
    em.summary["probes"] = static_cast<int>(rep.rows.size());
    em.summary["terms"] = terms;
    bool pass =
        rep.converged && rep.monotonicity_violations == 0 && rep.negativity_violations == 0;
    return em.finish(pass);
}

int run_trace(const RunConfig&, Emitter& em, const ProofTraceScenario& sc, int n_terms) {
    TraceReport rep = proof_trace_check(sc, n_terms);
    em.write_meta();
    em.csv << "n,k,qualifying_count,vicinity_mass,closure,hull,integral,bound,margin,"
              "barycenter_distance\n";
    for (const TraceRow& row : rep.rows)
        em.csv << row.n << "," << row.k << "," << row.qualifying_count << ","
               << format_double(row.vicinity_mass) << "," << format_double(row.closure_value)
               << "," << format_double(row.hull_value) << "," << format_double(row.integral)
               << "," << format_double(row.bound) << "," << format_double(row.margin) << ","
               << format_double(row.barycenter_distance) << "\n";
    em.summary["rows"] = static_cast<int>(rep.rows.size());
    em.summary["chain_ok"] = rep.chain_ok;
    em.summary["cutoff_cases_ok"] = rep.cutoff_cases_ok;
    em.summary["min_margin"] = to_jnum(rep.min_margin);
    em.summary["margin_min"] = to_jnum(margin_min);
    bool pass = rep.chain_ok && rep.cutoff_cases_ok && rep.min_margin >= margin_min;
    return em.finish(pass);
}

int run_tightness(const RunConfig& cfg, Emitter& em, const Fixture& fx) {
    if (fx.family.empty() || !fx.family_core)
        throw std::runtime_error("fixture '" + cfg.fixture +
                                 "' carries no measure family for 'tightness'");
    FamilyTightnessReport rep =
        tightness_check(fx.family, *fx.family_core, fx.family_delta, fx.family_eps);
    em.write_meta();
    em.csv << "member,vicinity_mass,offending\n";
    double min_mass = 1.0;
    for (size_t k = 0; k < rep.masses.size(); ++k) {
        bool offending =
            std::find(rep.offending.begin(), rep.offending.end(), static_cast<int>(k)) !=
            rep.offending.end();
        min_mass = std::min(min_mass, rep.masses[k]);
        em.csv << k << "," << format_double(rep.masses[k]) << "," << (offending ? 1 : 0)
               << "\n";
    }
    em.summary["members"] = static_cast<int>(rep.masses.size());
    em.summary["tight"] = rep.tight;
    em.summary["offending"] = rep.offending;
    em.summary["eps"] = to_jnum(fx.family_eps);
    em.summary["delta"] = to_jnum(fx.family_delta);
    em.summary["min_mass"] = to_jnum(min_mass);
    return em.finish(rep.tight);
}

int run_impl(const RunConfig& cfg) {
    static const std::vector<std::string> commands = {"conjugate", "envelope", "hull",
                                                      "converge",  "decrease", "trace",
                                                      "tightness", "regularize"};
    if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
        throw std::runtime_error("unknown command '" + cfg.command + "'");

    bool has_fixture = !cfg.fixture.empty();
    bool has_config = !cfg.config_path.empty();
    if (!has_fixture && !has_config)
        throw std::runtime_error("no input: pass --fixture or --config");
    if (has_fixture && has_config)
        throw std::runtime_error("pass either --fixture or --config, not both");

    bool config_capable = cfg.command == "conjugate" || cfg.command == "envelope" ||
                          cfg.command == "hull" || cfg.command == "regularize" ||
                          cfg.command == "trace";
    if (has_config && !config_capable)
        throw std::runtime_error("command '" + cfg.command +
                                 "' takes --fixture input only");

    std::optional<Fixture> fx;
    if (has_fixture) fx = make_fixture(cfg.fixture, cfg.seed, cfg.resolution);

    Emitter em{cfg,
               has_fixture ? "fixture " + cfg.fixture : "config " + cfg.config_path,
               nullptr,
               {},
               {},
               json::object()};

    if (cfg.command == "conjugate" || cfg.command == "envelope" || cfg.command == "hull" ||
        cfg.command == "regularize") {
        GridFunction f = input_function(cfg, fx ? &*fx : nullptr);
        em.domain = &f.domain();
        if (cfg.command == "conjugate") return run_conjugate(cfg, em, f);
        if (cfg.command == "envelope") return run_envelope(cfg, em, f);
        if (cfg.command == "hull") return run_hull(cfg, em, f);
        FunctionSequence ladder = regularization_ladder(f, 8);
        return run_harness_command(cfg, em, ladder);
    }

    if (cfg.command == "converge" || cfg.command == "decrease") {
        if (!fx->sequence)
            throw std::runtime_error("fixture '" + cfg.fixture +
                                     "' carries no sequence for '" + cfg.command + "'");
        em.domain = &fx->sequence->limit.domain();
        return run_harness_command(cfg, em, *fx->sequence);
    }

    if (cfg.command == "trace") {
        ProofTraceScenario sc;
        int n_terms = 0;
        if (has_config) {
            auto parsed = scenario_from_json(read_text(cfg.config_path));
            sc = std::move(parsed.first);
            n_terms = parsed.second;
        } else {
            if (!fx->scenario)
                throw std::runtime_error("fixture '" + cfg.fixture +
                                         "' carries no scenario for 'trace'");
            sc = *fx->scenario;
            n_terms = fx->scenario_terms;
        }
        em.domain = sc.domain.get();
        return run_trace(cfg, em, sc, n_terms);
    }

    em.domain = fx->domain.get();
    return run_tightness(cfg, em, *fx);
}

}  // namespace

int run(const RunConfig& config, std::ostream& err) {
    try {
        return run_impl(config);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
}

}  // namespace cvxenv
