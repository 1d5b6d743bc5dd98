#include "cvxenv/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace cvxenv {

using nlohmann::json;

namespace {

json parse_document(const std::string& text, const char* doc) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // keep nlohmann's "at line L, column C" diagnostics
        throw std::runtime_error(std::string(doc) + ": " + e.what());
    }
}

[[noreturn]] void fail(const char* doc, const std::string& detail) {
    throw std::runtime_error(std::string(doc) + ": " + detail);
}

const json& need(const json& j, const char* field, const char* doc) {
    if (!j.is_object()) fail(doc, std::string("expected an object holding '") + field + "'");
    auto it = j.find(field);
    if (it == j.end()) fail(doc, std::string("missing field '") + field + "'");
    return *it;
}

int need_int(const json& j, const char* field, const char* doc) {
    const json& v = need(j, field, doc);
    if (!v.is_number_integer()) fail(doc, std::string("field '") + field + "' must be an integer");
    return v.get<int>();
}

// numbers that may legitimately be infinite arrive as "inf"/"-inf" strings
double number_or_sentinel(const json& v, const char* field, const char* doc) {
    if (v.is_string()) {
        try {
            return parse_double_token(v.get<std::string>());
        } catch (const std::runtime_error&) {
            fail(doc, std::string("field '") + field + "' holds a non-numeric string");
        }
    }
    if (!v.is_number()) fail(doc, std::string("field '") + field + "' must be a number or \"inf\"");
    return v.get<double>();
}

double need_double(const json& j, const char* field, const char* doc) {
    return number_or_sentinel(need(j, field, doc), field, doc);
}

json to_jnum(double v) {
    if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
    return json(v);
}

Point point_from_json(const json& v, const char* field, const char* doc, int dimension) {
    if (!v.is_array() || static_cast<int>(v.size()) != dimension)
        fail(doc, std::string("field '") + field + "' must be an array of " +
                      std::to_string(dimension) + " coordinates");
    Point p(dimension);
    for (int a = 0; a < dimension; ++a) p[a] = number_or_sentinel(v[a], field, doc);
    return p;
}

json point_to_json(const Point& p) {
    json row = json::array();
    for (double c : p) row.push_back(to_jnum(c));
    return row;
}

json domain_to_jobj(const ConvexDomain& domain) {
    if (!domain.lattice())
        throw std::runtime_error(
            "domain: only lattice grids serialize as a resolution spec");
    int resolution = 0;
    for (int a = 0; a < domain.dimension(); ++a)
        resolution = std::max(resolution, domain.lattice()->count(a) - 1);
    json j;
    j["dimension"] = domain.dimension();
    j["metric_p"] = to_jnum(domain.metric().p);
    j["resolution"] = resolution;
    json verts = json::array();
    for (const Point& v : domain.vertices()) verts.push_back(point_to_json(v));
    j["vertices"] = verts;
    return j;
}

std::shared_ptr<const ConvexDomain> domain_from_jobj(const json& j, const char* doc) {
    int dimension = need_int(j, "dimension", doc);
    double p = need_double(j, "metric_p", doc);
    int resolution = need_int(j, "resolution", doc);
    const json& jv = need(j, "vertices", doc);
    if (!jv.is_array() || jv.empty()) fail(doc, "field 'vertices' must be a nonempty array");
    std::vector<Point> vertices;
    vertices.reserve(jv.size());
    for (const json& row : jv)
        vertices.push_back(point_from_json(row, "vertices", doc, dimension));
    return make_grid(dimension, std::move(vertices), Metric{p}, resolution);
}

json measures_to_jarr(const ConvexDomain& domain, const std::vector<FiniteMeasure>& family) {
    json arr = json::array();
    for (const FiniteMeasure& mu : family) {
        json entry;
        json support = json::array();
        for (int idx : mu.support) support.push_back(point_to_json(domain.grid_point(idx)));
        entry["support"] = support;
        json weights = json::array();
        for (double w : mu.weights) weights.push_back(to_jnum(w));
        entry["weights"] = weights;
        arr.push_back(entry);
    }
    return arr;
}

std::vector<FiniteMeasure> measures_from_jarr(std::shared_ptr<const ConvexDomain> domain,
                                              const json& arr, const char* doc) {
    if (!arr.is_array() || arr.empty()) fail(doc, "field 'measures' must be a nonempty array");
    std::vector<FiniteMeasure> family;
    family.reserve(arr.size());
    for (size_t k = 0; k < arr.size(); ++k) {
        const json& entry = arr[k];
        const json& js = need(entry, "support", doc);
        const json& jw = need(entry, "weights", doc);
        if (!js.is_array() || js.empty())
            fail(doc, "measure " + std::to_string(k) + ": 'support' must be a nonempty array");
        if (!jw.is_array() || jw.size() != js.size())
            fail(doc, "measure " + std::to_string(k) +
                          ": 'weights' length must match 'support'");
        std::vector<int> support;
        support.reserve(js.size());
        for (size_t i = 0; i < js.size(); ++i) {
            Point p = point_from_json(js[i], "support", doc, domain->dimension());
            auto idx = domain->grid_index_at(p);
            if (!idx)
                fail(doc, "measure " + std::to_string(k) + ": support point " +
                              std::to_string(i) + " is off the grid");
            support.push_back(*idx);
        }
        std::vector<double> weights;
        weights.reserve(jw.size());
        for (const json& w : jw) weights.push_back(number_or_sentinel(w, "weights", doc));
        family.push_back(make_measure(domain, std::move(support), std::move(weights)));
    }
    return family;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double_token(const std::string& token) {
    if (token == "inf") return std::numeric_limits<double>::infinity();
    if (token == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        throw std::runtime_error("number: cannot parse '" + token + "'");
    return v;
}

std::string domain_to_json(const ConvexDomain& domain) { return dump(domain_to_jobj(domain)); }

std::shared_ptr<const ConvexDomain> domain_from_json(const std::string& text) {
    return domain_from_jobj(parse_document(text, "domain"), "domain");
}

std::string function_to_json(const GridFunction& f) {
    json j;
    j["domain_ref"] = domain_to_jobj(f.domain());
    j["class_tag"] = to_string(f.tag());
    json values = json::array();
    for (int i = 0; i < f.domain().grid_size(); ++i) values.push_back(to_jnum(f.value(i)));
    j["values"] = values;
    return dump(j);
}

GridFunction function_from_json(const std::string& text) {
    const char* doc = "function";
    json j = parse_document(text, doc);
    auto domain = domain_from_jobj(need(j, "domain_ref", doc), doc);
    const json& jtag = need(j, "class_tag", doc);
    ClassTag tag = ClassTag::continuous_bounded;
    try {
        tag = class_tag_from_string(jtag.get<std::string>());
    } catch (const std::exception&) {
        fail(doc, "field 'class_tag' must name a function class");
    }
    const json& jv = need(j, "values", doc);
    if (!jv.is_array() || static_cast<int>(jv.size()) != domain->grid_size())
        fail(doc, "field 'values' must have one entry per grid point (" +
                      std::to_string(domain->grid_size()) + ")");
    std::vector<double> values;
    values.reserve(jv.size());
    for (const json& v : jv) values.push_back(number_or_sentinel(v, "values", doc));
    return GridFunction(std::move(domain), std::move(values), tag);
}

std::string measures_to_json(const ConvexDomain& domain,
                             const std::vector<FiniteMeasure>& family) {
    return dump(measures_to_jarr(domain, family));
}

std::vector<FiniteMeasure> measures_from_json(std::shared_ptr<const ConvexDomain> domain,
                                              const std::string& text) {
    const char* doc = "measures";
    return measures_from_jarr(std::move(domain), parse_document(text, doc), doc);
}

std::string scenario_to_json(const ProofTraceScenario& scenario, int n_terms) {
    json j;
    j["domain"] = domain_to_jobj(*scenario.domain);
    j["measures"] = measures_to_jarr(*scenario.domain, scenario.measures);
    j["eps"] = to_jnum(scenario.eps);
    j["delta"] = to_jnum(scenario.delta);
    json compacts = json::array();
    for (const CompactSubset& K : scenario.compacts) {
        json idx = json::array();
        for (int i : K.indices) idx.push_back(i);
        compacts.push_back(idx);
    }
    j["compacts"] = compacts;
    j["x0"] = point_to_json(scenario.x0);
    j["N_terms"] = n_terms;
    return dump(j);
}

std::pair<ProofTraceScenario, int> scenario_from_json(const std::string& text) {
    const char* doc = "scenario";
    json j = parse_document(text, doc);
    ProofTraceScenario sc;
    sc.domain = domain_from_jobj(need(j, "domain", doc), doc);
    sc.measures = measures_from_jarr(sc.domain, need(j, "measures", doc), doc);
    sc.eps = need_double(j, "eps", doc);
    sc.delta = need_double(j, "delta", doc);
    const json& jc = need(j, "compacts", doc);
    if (!jc.is_array() || jc.empty()) fail(doc, "field 'compacts' must be a nonempty array");
    for (size_t n = 0; n < jc.size(); ++n) {
        const json& row = jc[n];
        if (!row.is_array() || row.empty())
            fail(doc, "compact " + std::to_string(n) + " must be a nonempty index array");
        std::vector<int> idx;
        idx.reserve(row.size());
        for (const json& v : row) {
            if (!v.is_number_integer())
                fail(doc, "compact " + std::to_string(n) + " holds a non-integer index");
            int i = v.get<int>();
            if (i < 0 || i >= sc.domain->grid_size())
                fail(doc, "compact " + std::to_string(n) + ": index " + std::to_string(i) +
                              " outside the grid");
            idx.push_back(i);
        }
        sc.compacts.push_back(CompactSubset::of(*sc.domain, std::move(idx)));
    }
    sc.x0 = point_from_json(need(j, "x0", doc), "x0", doc, sc.domain->dimension());
    int n_terms = need_int(j, "N_terms", doc);
    return {std::move(sc), n_terms};
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace cvxenv
