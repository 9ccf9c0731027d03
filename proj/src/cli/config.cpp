#include "opshift/cli/config.hpp"

#include <fstream>

namespace opshift {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>> kKinds = {
    {ExperimentKind::sylvester_bench, "sylvester-bench"},
    {ExperimentKind::riccati_solve, "riccati-solve"},
    {ExperimentKind::blockdiag, "blockdiag"},
    {ExperimentKind::ssf_split, "ssf-split"},
    {ExperimentKind::friedrichs, "friedrichs"},
    {ExperimentKind::sharpness, "sharpness"},
    {ExperimentKind::homotopy, "homotopy"},
};

template <typename T>
void read(const nlohmann::json& j, const char* key, T& into)
{
    if (j.contains(key)) {
        into = j.at(key).get<T>();
    }
}

RealMatrix real_rows(const nlohmann::json& rows)
{
    if (!rows.is_array() || rows.empty()) {
        throw ParseError("matrix literal: expected a nonempty array of rows");
    }
    const auto r = static_cast<Index>(rows.size());
    const auto c = static_cast<Index>(rows.at(0).size());
    RealMatrix m(r, c);
    for (Index i = 0; i < r; ++i) {
        const auto& row = rows.at(static_cast<std::size_t>(i));
        if (static_cast<Index>(row.size()) != c) {
            throw ParseError("matrix literal: ragged rows");
        }
        for (Index k = 0; k < c; ++k) {
            m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
        }
    }
    return m;
}

}  // namespace

std::string kind_name(ExperimentKind k)
{
    for (const auto& [kind, name] : kKinds) {
        if (kind == k) {
            return name;
        }
    }
    return "unknown";
}

ExperimentKind parse_kind(const std::string& name)
{
    for (const auto& [kind, n] : kKinds) {
        if (n == name) {
            return kind;
        }
    }
    throw ParseError("unknown experiment kind '" + name + "'");
}

std::map<std::string, double> default_tolerances()
{
    return {
        {"residual", 1e-10},
        {"oracle_spectral", 1e-10},
        {"oracle_contour", 1e-8},
        {"oracle_exponential", 1e-8},
        {"oracle_fourier", 1e-6},
        {"bound", 1e-9},
        {"offdiag", 1e-10},
        {"unitary", 1e-12},
        {"spectrum", 1e-9},
        {"separation", 1e-9},
        {"projector", 1e-10},
        {"argument", 1e-6},
        {"trace", 1e-6},
        {"gap", 1e-12},
        {"refinement_lo", 1.8},
        {"refinement_hi", 2.2},
    };
}

double ExperimentConfig::tol(const std::string& key) const
{
    const auto it = tolerances.find(key);
    if (it == tolerances.end()) {
        throw ParseError("no tolerance named '" + key + "'");
    }
    return it->second;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j)
{
    if (j.is_number()) {
        return ComplexMatrix::Constant(1, 1, Complex(j.get<double>(), 0.0));
    }
    if (j.is_array()) {
        return real_rows(j).cast<Complex>();
    }
    if (j.is_object() && j.contains("diag")) {
        const auto v = j.at("diag").get<std::vector<double>>();
        ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(v.size()), static_cast<Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            m(static_cast<Index>(i), static_cast<Index>(i)) = v[i];
        }
        return m;
    }
    if (j.is_object() && j.contains("re")) {
        const RealMatrix re = real_rows(j.at("re"));
        RealMatrix im = RealMatrix::Zero(re.rows(), re.cols());
        if (j.contains("im")) {
            im = real_rows(j.at("im"));
            if (im.rows() != re.rows() || im.cols() != re.cols()) {
                throw ParseError("matrix literal: re and im differ in shape");
            }
        }
        ComplexMatrix m(re.rows(), re.cols());
        m.real() = re;
        m.imag() = im;
        return m;
    }
    throw ParseError("matrix literal: unrecognized form");
}

ExperimentConfig parse_config(const nlohmann::json& j)
{
    ExperimentConfig cfg;
    try {
        if (!j.contains("kind")) {
            throw ParseError("config: missing 'kind'");
        }
        cfg.kind = parse_kind(j.at("kind").get<std::string>());
        read(j, "seed", cfg.seed);
        read(j, "trials", cfg.trials);
        if (j.contains("dims")) {
            const auto dims = j.at("dims").get<std::vector<Index>>();
            if (dims.size() != 2) {
                throw ParseError("config: 'dims' must have two entries");
            }
            cfg.n0 = dims[0];
            cfg.n1 = dims[1];
        }
        if (j.contains("gap")) {
            const auto& g = j.at("gap");
            if (g.is_array()) {
                const auto v = g.get<std::vector<double>>();
                if (v.size() != 2) {
                    throw ParseError("config: 'gap' range must have two entries");
                }
                cfg.gap_lo = v[0];
                cfg.gap_hi = v[1];
            } else {
                cfg.gap_lo = cfg.gap_hi = g.get<double>();
            }
        }
        read(j, "spread", cfg.spread);
        read(j, "layout", cfg.layout);
        if (j.contains("norm_target")) {
            const auto& t = j.at("norm_target");
            read(t, "hypothesis", cfg.target.hypothesis);
            read(t, "fraction", cfg.target.fraction);
            if (t.contains("value")) {
                cfg.target.value = t.at("value").get<double>();
            }
        }
        if (j.contains("tolerances")) {
            for (const auto& [k, v] : j.at("tolerances").items()) {
                cfg.tolerances[k] = v.get<double>();
            }
        }
        read(j, "method", cfg.method);
        read(j, "override_hypothesis", cfg.override_hypothesis);
        read(j, "t_count", cfg.t_count);
        read(j, "grid_points", cfg.grid_points);
        read(j, "regular_points", cfg.regular_points);
        read(j, "bump_count", cfg.bump_count);
        read(j, "d", cfg.d);
        read(j, "c_values", cfg.c_values);
        read(j, "b_norms", cfg.b_norms);
        read(j, "coupling", cfg.coupling);
        read(j, "support", cfg.support);
        read(j, "epsilon", cfg.epsilon);
        read(j, "nodes", cfg.nodes);
        read(j, "truncation", cfg.truncation);
        read(j, "eps_count", cfg.eps_count);
        read(j, "sharpness_margin", cfg.sharpness_margin);
        if (j.contains("instance")) {
            cfg.instance = j.at("instance");
        }
        if (j.contains("expect")) {
            for (const auto& [k, v] : j.at("expect").items()) {
                cfg.expect[k] = {v.at("value").get<double>(), v.value("tol", 1e-9)};
            }
        }
        if (j.contains("out")) {
            cfg.out = j.at("out").get<std::string>();
        }
        read(j, "write_matrices", cfg.write_matrices);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }

    if (cfg.trials < 0) {
        throw ParseError("config: 'trials' must be nonnegative");
    }
    if (cfg.n0 < 1 || cfg.n1 < 1) {
        throw ParseError("config: dimensions must be positive");
    }
    if (cfg.gap_lo > cfg.gap_hi || cfg.gap_lo < 0.0) {
        throw ParseError("config: invalid gap range");
    }
    for (const auto& [k, v] : cfg.tolerances) {
        if (!(v > 0.0)) {
            throw ParseError("config: tolerance '" + k + "' must be positive");
        }
    }
    if (cfg.layout != "below" && cfg.layout != "above" && cfg.layout != "surrounding" && cfg.layout != "mixed") {
        throw ParseError("config: unknown layout '" + cfg.layout + "'");
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

nlohmann::json to_json(const ExperimentConfig& cfg)
{
    nlohmann::json j;
    j["kind"] = kind_name(cfg.kind);
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["dims"] = {cfg.n0, cfg.n1};
    j["gap"] = {cfg.gap_lo, cfg.gap_hi};
    j["spread"] = cfg.spread;
    j["layout"] = cfg.layout;
    nlohmann::json t;
    t["hypothesis"] = cfg.target.hypothesis;
    t["fraction"] = cfg.target.fraction;
    if (cfg.target.value) {
        t["value"] = *cfg.target.value;
    }
    j["norm_target"] = t;
    j["tolerances"] = cfg.tolerances;
    j["method"] = cfg.method;
    j["override_hypothesis"] = cfg.override_hypothesis;
    j["t_count"] = cfg.t_count;
    j["grid_points"] = cfg.grid_points;
    j["regular_points"] = cfg.regular_points;
    j["bump_count"] = cfg.bump_count;
    j["d"] = cfg.d;
    j["c_values"] = cfg.c_values;
    j["b_norms"] = cfg.b_norms;
    j["coupling"] = cfg.coupling;
    j["support"] = cfg.support;
    j["epsilon"] = cfg.epsilon;
    j["nodes"] = cfg.nodes;
    j["truncation"] = cfg.truncation;
    j["eps_count"] = cfg.eps_count;
    j["sharpness_margin"] = cfg.sharpness_margin;
    if (cfg.instance) {
        j["instance"] = *cfg.instance;
    }
    if (!cfg.expect.empty()) {
        nlohmann::json e = nlohmann::json::object();
        for (const auto& [k, v] : cfg.expect) {
            e[k] = {{"value", v.first}, {"tol", v.second}};
        }
        j["expect"] = e;
    }
    j["out"] = cfg.out.string();
    j["write_matrices"] = cfg.write_matrices;
    return j;
}

void apply_tolerance_override(ExperimentConfig& cfg, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ParseError("tolerance override must look like key=value: '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(assignment.substr(eq + 1), &used);
        if (used != assignment.size() - eq - 1) {
            throw std::invalid_argument("trailing characters");
        }
    } catch (const std::exception&) {
        throw ParseError("tolerance override '" + assignment + "': value is not a number");
    }
    if (!(value > 0.0)) {
        throw ParseError("tolerance override '" + assignment + "': must be positive");
    }
    cfg.tolerances[key] = value;
}

}  // namespace opshift
