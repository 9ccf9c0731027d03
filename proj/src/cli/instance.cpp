#include <algorithm>
#include <numbers>

#include "opshift/cli/campaign.hpp"
#include "opshift/core/functions.hpp"
#include "opshift/core/norms.hpp"
#include "opshift/core/random.hpp"

namespace opshift {

namespace {

// Spectra of the first and second operator with dist = d exactly: one
// eigenvalue of each is pinned at the facing endpoint.
std::pair<RealVector, RealVector> place_spectra(Rng& rng, Index n_first, Index n_second, double d, double w,
                                                const std::string& layout)
{
    RealVector first(n_first);
    RealVector second(n_second);
    auto fill = [&](RealVector& v, double lo, double hi) {
        for (Index i = 0; i < v.size(); ++i) {
            v(i) = uniform(rng, lo, hi);
        }
    };
    if (layout == "below") {
        fill(first, -w, 0.0);
        first(0) = 0.0;
        fill(second, d, d + w);
        second(0) = d;
    } else if (layout == "above") {
        fill(first, d, d + w);
        first(0) = d;
        fill(second, -w, 0.0);
        second(0) = 0.0;
    } else {
        // first surrounds second: second in [0, w], first outside [-d, w + d]
        fill(second, 0.0, w);
        second(0) = 0.0;
        if (n_second > 1) {
            second(n_second - 1) = w;
        }
        for (Index i = 0; i < n_first; ++i) {
            const bool left = i == 0 || (i > 1 && uniform(rng, 0.0, 1.0) < 0.5);
            first(i) = left ? uniform(rng, -d - w, -d) : uniform(rng, w + d, 2.0 * w + d);
        }
        // one eigenvalue on each side when there are two or more
        first(0) = -d;
    }
    return {first, second};
}

std::string resolve_layout(Rng& rng, const std::string& layout)
{
    if (layout != "mixed") {
        return layout;
    }
    const double u = uniform(rng, 0.0, 3.0);
    return u < 1.0 ? "below" : (u < 2.0 ? "above" : "surrounding");
}

std::string default_hypothesis(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::sylvester_bench: return "value";
    case ExperimentKind::riccati_solve: return "strong";
    default: return "henorm";
    }
}

bool needs_gap(const std::string& h)
{
    return h == "strong" || h == "weak" || h == "henorm" || h == "hbpi";
}

nlohmann::json norms_json(const std::vector<NamedMatrix>& ms)
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& m : ms) {
        j[m.name] = {{"rows", m.entries.rows()},
                     {"cols", m.entries.cols()},
                     {"operator_norm", operator_norm(m.entries)},
                     {"frobenius", m.entries.norm()}};
    }
    return j;
}

Instance explicit_instance(const ExperimentConfig& cfg, int trial)
{
    Instance inst;
    inst.trial = trial;
    inst.layout = "explicit";
    const auto& spec = *cfg.instance;
    std::vector<std::pair<std::string, MatrixKind>> names;
    switch (cfg.kind) {
    case ExperimentKind::sylvester_bench:
        names = {{"A", MatrixKind::hermitian}, {"C", MatrixKind::hermitian}, {"Y", MatrixKind::dense}};
        break;
    case ExperimentKind::riccati_solve:
        names = {{"A", MatrixKind::hermitian},
                 {"C", MatrixKind::hermitian},
                 {"B", MatrixKind::dense},
                 {"D", MatrixKind::dense}};
        break;
    case ExperimentKind::blockdiag:
    case ExperimentKind::ssf_split:
    case ExperimentKind::homotopy:
        names = {{"A0", MatrixKind::hermitian}, {"A1", MatrixKind::hermitian}, {"B01", MatrixKind::dense}};
        break;
    default: throw ParseError("config: kind " + kind_name(cfg.kind) + " takes no explicit instance");
    }
    for (const auto& [name, kind] : names) {
        if (!spec.contains(name)) {
            throw ParseError("config: explicit instance is missing " + name);
        }
        inst.matrices.push_back({name, matrix_from_json(spec.at(name)), kind});
    }
    return inst;
}

}  // namespace

const ComplexMatrix& Instance::get(const std::string& name) const
{
    for (const auto& m : matrices) {
        if (m.name == name) {
            return m.entries;
        }
    }
    throw PreconditionError("instance has no matrix " + name);
}

Instance generate_instance(const ExperimentConfig& cfg, int trial)
{
    const std::string hypothesis = cfg.target.hypothesis.empty() ? default_hypothesis(cfg.kind) : cfg.target.hypothesis;
    if (cfg.instance) {
        Instance inst = explicit_instance(cfg, trial);
        inst.manifest = {{"kind", kind_name(cfg.kind)},
                         {"trial", trial},
                         {"source", "explicit"},
                         {"norms", norms_json(inst.matrices)}};
        return inst;
    }

    Instance inst;
    inst.trial = trial;
    inst.trial_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Rng rng(inst.trial_seed);
    const double d = cfg.gap_lo == cfg.gap_hi ? cfg.gap_lo : uniform(rng, cfg.gap_lo, cfg.gap_hi);
    inst.target_gap = d;
    if (needs_gap(hypothesis) && !(d > 0.0)) {
        throw PreconditionError("generate_instance: target '" + hypothesis + "' needs a positive gap");
    }

    std::string layout = cfg.layout;
    if (hypothesis == "hadl") {
        if (layout == "surrounding") {
            throw PreconditionError("generate_instance: HAdL needs ordered spectra, not 'surrounding'");
        }
        if (layout == "mixed") {
            layout = uniform(rng, 0.0, 1.0) < 0.5 ? "below" : "above";
        }
    } else if (hypothesis == "none") {
        layout = "surrounding";
    }
    inst.layout = resolve_layout(rng, layout);
    auto [s0, s1] = place_spectra(rng, cfg.n0, cfg.n1, d, cfg.spread, inst.layout);
    const HermitianOperator a = random_hermitian_with_spectrum(rng, s0);
    const HermitianOperator c = random_hermitian_with_spectrum(rng, s1);
    const double gap = spec_distance(a, c);

    nlohmann::json target = {{"hypothesis", hypothesis}, {"fraction", cfg.target.fraction}};
    switch (cfg.kind) {
    case ExperimentKind::sylvester_bench: {
        ComplexMatrix y = gaussian_matrix(rng, cfg.n1, cfg.n0);
        const double value = cfg.target.value.value_or(1.0);
        y *= value / operator_norm(y);
        inst.matrices = {{"A", a.matrix(), MatrixKind::hermitian},
                         {"C", c.matrix(), MatrixKind::hermitian},
                         {"Y", y, MatrixKind::dense}};
        target["value"] = value;
        break;
    }
    case ExperimentKind::riccati_solve: {
        ComplexMatrix b = gaussian_matrix(rng, cfg.n0, cfg.n1);
        ComplexMatrix dm = gaussian_matrix(rng, cfg.n1, cfg.n0);
        if (hypothesis == "strong") {
            const double t = cfg.target.fraction * gap / 2.0;
            b *= t / operator_norm(b);
            dm *= t / ec_norm(dm, c.decomposition());
        } else if (hypothesis == "weak") {
            const double t = cfg.target.fraction * gap / std::numbers::pi;
            b *= t / operator_norm(b);
            dm *= t / operator_norm(dm);
        } else if (hypothesis == "value" || hypothesis == "none") {
            const double t = cfg.target.value.value_or(2.0 * std::max(gap, 1.0));
            b *= t / operator_norm(b);
            dm *= t / operator_norm(dm);
            target["value"] = t;
        } else {
            throw ParseError("config: riccati-solve norm target must be strong, weak, value or none");
        }
        inst.matrices = {{"A", a.matrix(), MatrixKind::hermitian},
                         {"C", c.matrix(), MatrixKind::hermitian},
                         {"B", b, MatrixKind::dense},
                         {"D", dm, MatrixKind::dense}};
        break;
    }
    case ExperimentKind::blockdiag:
    case ExperimentKind::ssf_split:
    case ExperimentKind::homotopy: {
        ComplexMatrix b = gaussian_matrix(rng, cfg.n0, cfg.n1);
        if (hypothesis == "henorm") {
            const double e = std::min(ec_norm(b, a.decomposition()), ec_norm(b.adjoint(), c.decomposition()));
            const double bn = operator_norm(b);
            b *= std::sqrt(cfg.target.fraction * gap * gap / 4.0 / (bn * e));
        } else if (hypothesis == "hbpi") {
            b *= cfg.target.fraction * gap / std::numbers::pi / operator_norm(b);
        } else if (hypothesis == "hadl" || hypothesis == "none" || hypothesis == "value") {
            const double t = cfg.target.value.value_or(2.0 * std::max(gap, 1.0));
            b *= t / operator_norm(b);
            target["value"] = t;
        } else {
            throw ParseError("config: block norm target must be henorm, hbpi, hadl, value or none");
        }
        inst.matrices = {{"A0", a.matrix(), MatrixKind::hermitian},
                         {"A1", c.matrix(), MatrixKind::hermitian},
                         {"B01", b, MatrixKind::dense}};
        break;
    }
    default: throw PreconditionError("generate_instance: kind " + kind_name(cfg.kind) + " has no matrix instance");
    }

    nlohmann::json files = nlohmann::json::object();
    for (const auto& m : inst.matrices) {
        files[m.name] = m.name + ".mat";
    }
    inst.manifest = {{"kind", kind_name(cfg.kind)},
                     {"seed", cfg.seed},
                     {"trial", trial},
                     {"trial_seed", inst.trial_seed},
                     {"source", "generated"},
                     {"layout", inst.layout},
                     {"dims", {cfg.n0, cfg.n1}},
                     {"spread", cfg.spread},
                     {"target_gap", d},
                     {"gap", gap},
                     {"norm_target", target},
                     {"norms", norms_json(inst.matrices)},
                     {"matrices", files}};
    return inst;
}

}  // namespace opshift
