#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <boost/version.hpp>

#include "opshift/cli/campaign.hpp"
#include "opshift/core/functions.hpp"
#include "opshift/core/norms.hpp"
#include "opshift/core/random.hpp"
#include "opshift/graph/decomposition.hpp"
#include "opshift/riccati/friedrichs.hpp"
#include "opshift/riccati/iteration.hpp"
#include "opshift/ssf/ssf.hpp"
#include "opshift/sylvester/solvers.hpp"

namespace opshift {

namespace {

struct Context {
    const ExperimentConfig& cfg;
    std::filesystem::path trial_dir;  // empty: no files
};

std::string trial_dir_name(int trial)
{
    std::ostringstream s;
    s << "trial-" << std::setw(4) << std::setfill('0') << trial;
    return s.str();
}

void matrix_metrics(std::map<std::string, double>& m, const std::string& name, const ComplexMatrix& x)
{
    if (x.size() > 16) {
        return;
    }
    for (Index i = 0; i < x.rows(); ++i) {
        for (Index k = 0; k < x.cols(); ++k) {
            const std::string idx = "[" + std::to_string(i) + "," + std::to_string(k) + "]";
            m[name + "_re" + idx] = x(i, k).real();
            if (x(i, k).imag() != 0.0) {
                m[name + "_im" + idx] = x(i, k).imag();
            }
        }
    }
}

void vector_metrics(std::map<std::string, double>& m, const std::string& name, const RealVector& v)
{
    if (v.size() > 16) {
        return;
    }
    for (Index i = 0; i < v.size(); ++i) {
        m[name + "[" + std::to_string(i) + "]"] = v(i);
    }
}

double rel_frobenius(const ComplexMatrix& x, const ComplexMatrix& ref)
{
    const double n = ref.norm();
    return n > 0.0 ? (x - ref).norm() / n : (x - ref).norm();
}

RealVector sorted_real(const ComplexVector& v)
{
    RealVector r = v.real();
    std::sort(r.data(), r.data() + r.size());
    return r;
}

RealVector hermitian_spectrum(const ComplexMatrix& m)
{
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

double spectrum_mismatch(const RealVector& a, const RealVector& b)
{
    if (a.size() != b.size()) {
        return std::numeric_limits<double>::infinity();
    }
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

double bool_value(bool b)
{
    return b ? 1.0 : 0.0;
}

void finish(TrialRecord& r)
{
    if (r.status == "skipped" || r.status == "error") {
        return;
    }
    bool ok = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
    for (auto& m : r.methods) {
        if (m.status == "not_applicable" || m.status == "error") {
            ok = ok && m.status != "error";
            continue;
        }
        m.status = std::all_of(m.checks.begin(), m.checks.end(), [](const Check& c) { return c.pass; }) ? "pass"
                                                                                                     : "fail";
        ok = ok && m.status == "pass";
    }
    r.status = ok ? "pass" : "fail";
}

void apply_expectations(const ExperimentConfig& cfg, TrialRecord& r)
{
    for (const auto& [name, expected] : cfg.expect) {
        const auto it = r.metrics.find(name);
        const double value = it == r.metrics.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
        const double dev = std::abs(value - expected.first);
        r.checks.push_back(make_check("expect:" + name, std::isnan(dev) ? kInfinity : dev, "<=", expected.second));
    }
}

// ---------------------------------------------------------------- sylvester

void run_sylvester(const Context& ctx, const Instance& inst, TrialRecord& r)
{
    const auto& cfg = ctx.cfg;
    const SylvesterProblem p(HermitianOperator(inst.get("A")), HermitianOperator(inst.get("C")), inst.get("Y"));
    r.metrics["gap"] = p.gap();
    if (!(p.gap() > kGapTolerance)) {
        r.status = "skipped";
        r.message = "spectra of A and C are not separated";
        return;
    }
    const ComplexMatrix oracle = solve_oracle(p);
    const BoundMargins m = bound_margins(p, oracle);
    r.metrics["oracle_residual"] = sylvester_residual(p, oracle);
    r.metrics["margin_operator"] = m.operator_norm;
    r.metrics["margin_hs"] = m.hilbert_schmidt;
    r.metrics["margin_ec"] = m.ec_norm;
    r.metrics["min_margin"] = std::min({m.operator_norm, m.hilbert_schmidt, m.ec_norm});
    r.checks.push_back(make_check("bound_operator", m.operator_norm, ">=", -cfg.tol("bound")));
    r.checks.push_back(make_check("bound_hs", m.hilbert_schmidt, ">=", -cfg.tol("bound")));
    r.checks.push_back(make_check("bound_ec", m.ec_norm, ">=", -cfg.tol("bound")));
    matrix_metrics(r.metrics, "X", oracle);

    const std::vector<std::pair<SylvesterMethod, std::string>> methods = {
        {SylvesterMethod::stieltjes, "oracle_spectral"},
        {SylvesterMethod::double_stieltjes, "oracle_spectral"},
        {SylvesterMethod::contour, "oracle_contour"},
        {SylvesterMethod::exponential, "oracle_exponential"},
        {SylvesterMethod::fourier, "oracle_fourier"},
    };
    double max_residual = 0.0;
    double max_dev = 0.0;
    for (const auto& [method, tol_key] : methods) {
        MethodRecord mr;
        mr.method = method_name(method);
        if (!applicable(p, method)) {
            mr.status = "not_applicable";
            r.methods.push_back(mr);
            continue;
        }
        try {
            const SolverReport s = run_solver(p, method, oracle);
            mr.metrics["residual"] = s.residual;
            mr.metrics["oracle_deviation"] = s.oracle_deviation;
            mr.metrics["margin_operator"] = s.bound_margins.operator_norm;
            mr.metrics["margin_hs"] = s.bound_margins.hilbert_schmidt;
            mr.checks.push_back(make_check("oracle_deviation", s.oracle_deviation, "<=", cfg.tol(tol_key)));
            max_residual = std::max(max_residual, s.residual);
            max_dev = std::max(max_dev, s.oracle_deviation);
            mr.status = "pass";
        } catch (const Error& e) {
            mr.status = "error";
            mr.message = e.what();
        }
        r.methods.push_back(mr);
    }
    r.metrics["max_residual"] = max_residual;
    r.metrics["max_deviation"] = max_dev;
}

// ---------------------------------------------------------------- riccati

void run_riccati(const Context& ctx, const Instance& inst, TrialRecord& r)
{
    const auto& cfg = ctx.cfg;
    const RiccatiProblem p(HermitianOperator(inst.get("A")), HermitianOperator(inst.get("C")), inst.get("B"),
                           inst.get("D"));
    const ExistenceCertificate cert = existence_report(p);
    r.metrics["gap"] = cert.gap;
    r.metrics["b_norm"] = cert.b_norm;
    r.metrics["d_norm"] = cert.d_norm;
    r.metrics["d_ec_norm"] = cert.d_ec_norm;
    r.metrics["weak_condition"] = bool_value(cert.weak_condition);
    r.metrics["strong_condition"] = bool_value(cert.strong_condition);
    r.metrics["contraction_sum_weak"] = bool_value(cert.contraction_sum_weak);
    r.metrics["contraction_sum_strong"] = bool_value(cert.contraction_sum_strong);
    if (cert.predicted_norm_bound) {
        r.metrics["predicted_norm_bound"] = *cert.predicted_norm_bound;
    }
    if (cert.predicted_ec_bound) {
        r.metrics["predicted_ec_bound"] = *cert.predicted_ec_bound;
    }

    std::vector<std::string> runs;
    if (cfg.method == "auto") {
        if (cert.strong_condition) {
            runs = {"stieltjes"};
        } else if (cert.weak_condition) {
            runs = {"fourier"};
        } else if (cfg.override_hypothesis) {
            runs = {"stieltjes"};
        }
    } else if (cfg.method == "both") {
        runs = {"stieltjes", "fourier"};
    } else if (cfg.method == "stieltjes" || cfg.method == "fourier") {
        runs = {cfg.method};
    } else {
        throw ParseError("config: riccati-solve method must be auto, stieltjes, fourier or both");
    }
    auto certified = [&](const std::string& m) {
        return m == "stieltjes" ? cert.strong_condition : cert.weak_condition;
    };
    runs.erase(std::remove_if(runs.begin(), runs.end(),
                              [&](const std::string& m) { return !certified(m) && !cfg.override_hypothesis; }),
               runs.end());
    if (runs.empty()) {
        r.status = "skipped";
        r.message = "no existence certificate holds";
        return;
    }
    r.route = runs.front();

    RiccatiOptions opts;
    opts.residual_tol = cfg.tol("residual");
    opts.override_certificate = cfg.override_hypothesis;
    std::vector<ComplexMatrix> solutions;
    double max_residual = 0.0;
    for (const auto& m : runs) {
        MethodRecord mr;
        mr.method = m;
        try {
            const RiccatiSolution s = m == "stieltjes" ? iterate_stieltjes(p, std::nullopt, opts)
                                                       : iterate_fourier(p, std::nullopt, opts);
            const double residual = riccati_residual(s.q, p);
            const double qn = operator_norm(s.q);
            const double qe = ec_norm(s.q, p.c().decomposition());
            mr.metrics["iterations"] = static_cast<double>(s.trace.rows.size());
            mr.metrics["residual"] = residual;
            mr.metrics["q_norm"] = qn;
            mr.metrics["q_ec_norm"] = qe;
            mr.metrics["observed_contraction"] = s.trace.observed_contraction;
            mr.checks.push_back(make_check("converged", bool_value(s.trace.converged), "==", 1.0));
            mr.checks.push_back(make_check("iterations", static_cast<double>(s.trace.rows.size()), "<=", 200.0));
            mr.checks.push_back(make_check("residual", residual, "<=", cfg.tol("residual")));
            mr.checks.push_back(make_check("dual_identity", std::abs(dual_riccati_check(s.q, p) - residual), "<=", 1e-12));
            if (cert.weak_condition && cert.predicted_norm_bound) {
                mr.checks.push_back(make_check("weak_norm_bound", qn, "<=", *cert.predicted_norm_bound + cfg.tol("bound")));
            }
            if (cert.strong_condition && cert.predicted_ec_bound) {
                mr.checks.push_back(make_check("strong_ec_bound", qe, "<=", *cert.predicted_ec_bound + cfg.tol("bound")));
                if (cert.b_norm > 0.0) {
                    mr.checks.push_back(make_check("strong_ball", qn, "<", cert.strong_ball_radius()));
                }
            }
            if (cert.contraction_sum_strong || cert.contraction_sum_weak) {
                mr.checks.push_back(make_check("strict_contraction", qn, "<", 1.0));
            }
            if (cert.b_norm == 0.0) {
                const ComplexMatrix x = solve_stieltjes(SylvesterProblem(p.a(), p.c(), p.d()));
                mr.checks.push_back(make_check("sylvester_reduction", rel_frobenius(s.q, x), "<=", 1e-10));
            }
            matrix_metrics(mr.metrics, "Q", s.q);
            max_residual = std::max(max_residual, residual);
            solutions.push_back(s.q);
            if (!ctx.trial_dir.empty()) {
                std::ofstream out(ctx.trial_dir / ("trace-" + m + ".csv"));
                write_trace_csv(out, s.trace);
            }
            mr.status = "pass";
        } catch (const Error& e) {
            mr.status = "error";
            mr.message = e.what();
        }
        r.methods.push_back(mr);
    }
    if (!solutions.empty()) {
        matrix_metrics(r.metrics, "Q", solutions.front());
    }
    if (solutions.size() == 2) {
        r.metrics["cross_method"] = (solutions[0] - solutions[1]).norm();
        r.checks.push_back(make_check("cross_method", r.metrics["cross_method"], "<=", 1e-6));
    }
    r.metrics["max_residual"] = max_residual;
}

// ---------------------------------------------------------------- block kinds

BlockOperatorMatrix block_from(const Instance& inst)
{
    return {HermitianOperator(inst.get("A0")), HermitianOperator(inst.get("A1")), inst.get("B01")};
}

void hypothesis_metrics(const HypothesisReport& h, TrialRecord& r)
{
    r.metrics["gap"] = h.d;
    r.metrics["b_norm"] = h.b_norm;
    r.metrics["ec_norm_a0"] = h.ec_norm_a0;
    r.metrics["ec_norm_a1"] = h.ec_norm_a1;
    r.metrics["henorm_holds"] = bool_value(h.henorm_holds);
    r.metrics["hbpi_holds"] = bool_value(h.hbpi_holds);
    r.metrics["hadl_holds"] = bool_value(h.hadl_holds);
    if (h.hadl_gap) {
        r.metrics["hadl_a0"] = h.hadl_gap->first;
        r.metrics["hadl_a1"] = h.hadl_gap->second;
    }
}

AngularMethod parse_angular(const std::string& m)
{
    if (m == "stieltjes") {
        return AngularMethod::stieltjes;
    }
    if (m == "fourier") {
        return AngularMethod::fourier;
    }
    if (m == "spectral") {
        return AngularMethod::spectral;
    }
    if (m == "auto") {
        return AngularMethod::automatic;
    }
    throw ParseError("config: angular method must be auto, stieltjes, fourier or spectral");
}

// Method for a block trial: explicit, or the route of the targeted hypothesis
// when it holds, or automatic. Empty when nothing applies.
std::optional<AngularMethod> choose_angular(const ExperimentConfig& cfg, const HypothesisReport& h)
{
    const AngularMethod m = parse_angular(cfg.method);
    if (m != AngularMethod::automatic) {
        if (h.holds(hypothesis_for(m)) || cfg.override_hypothesis) {
            return m;
        }
        return std::nullopt;
    }
    const std::string& t = cfg.target.hypothesis;
    if (t == "henorm" && h.henorm_holds) {
        return AngularMethod::stieltjes;
    }
    if (t == "hbpi" && h.hbpi_holds) {
        return AngularMethod::fourier;
    }
    if (t == "hadl" && h.hadl_holds) {
        return AngularMethod::spectral;
    }
    if (h.henorm_holds || h.hbpi_holds || h.hadl_holds) {
        return select_method(h);
    }
    if (cfg.override_hypothesis) {
        return AngularMethod::stieltjes;
    }
    return std::nullopt;
}

struct BlockSetup {
    BlockOperatorMatrix b;
    HypothesisReport h;
    AngularMethod method;
    Hypothesis hypothesis;
    AngularOperator q;
};

std::optional<BlockSetup> setup_block(const Context& ctx, const Instance& inst, TrialRecord& r)
{
    BlockOperatorMatrix b = block_from(inst);
    const HypothesisReport h = hypothesis_report(b);
    hypothesis_metrics(h, r);
    const auto method = choose_angular(ctx.cfg, h);
    if (!method) {
        r.status = "skipped";
        r.message = "no hypothesis (HEnorm, HBpi, HAdL) holds";
        return std::nullopt;
    }
    AngularOptions opts;
    opts.override_hypothesis = ctx.cfg.override_hypothesis;
    AngularOperator q = solve_angular(b, *method, opts);
    r.route = q.route();
    r.metrics["riccati_residual"] = block_riccati_residual(b, q);
    r.metrics["q_norm"] = operator_norm(q.q10());
    matrix_metrics(r.metrics, "Q10", q.q10());
    return BlockSetup{b, h, *method, hypothesis_for(*method), q};
}

void run_blockdiag(const Context& ctx, const Instance& inst, TrialRecord& r)
{
    const auto& cfg = ctx.cfg;
    auto s = setup_block(ctx, inst, r);
    if (!s) {
        return;
    }
    const auto& b = s->b;
    const auto& q = s->q;
    const double hn = operator_norm(b.h().matrix());
    const double residual = r.metrics["riccati_residual"];
    r.checks.push_back(make_check("riccati_residual", residual, "<=", cfg.tol("residual")));
    r.checks.push_back(make_check("invariance", invariance_defect(b, q), "<=", 1e-9 * (1.0 + hn)));

    const DiagonalizationResult sim = similarity_diagonalize(b, q);
    const DiagonalizationResult uni = unitary_diagonalize(b, q);
    r.metrics["similarity_offdiag"] = sim.offdiag_residual;
    r.metrics["similarity_block_deviation"] = sim.block_deviation;
    r.metrics["unitary_offdiag"] = uni.offdiag_residual;
    r.metrics["unitarity_defect"] = uni.unitarity_defect;
    r.metrics["polar_block_deviation"] = uni.block_deviation;
    r.metrics["vv_structure_defect"] = uni.vv_structure_defect;
    r.checks.push_back(make_check("similarity_offdiag", sim.offdiag_residual, "<=", cfg.tol("offdiag") * (1.0 + hn)));
    r.checks.push_back(make_check("similarity_blocks", sim.block_deviation, "<=", 1e-8 * (1.0 + hn)));
    r.checks.push_back(make_check("unitarity", uni.unitarity_defect, "<=", cfg.tol("unitary")));
    r.checks.push_back(make_check("unitary_offdiag", uni.offdiag_residual, "<=", cfg.tol("offdiag") * (1.0 + hn)));
    r.checks.push_back(make_check("polar_blocks", uni.block_deviation, "<=", cfg.tol("offdiag") * (1.0 + hn)));
    r.checks.push_back(make_check("vv_structure", uni.vv_structure_defect, "<=", cfg.tol("unitary")));

    RealVector joined(b.n0() + b.n1());
    const RealVector h0 = hermitian_spectrum(uni.h0);
    const RealVector h1 = hermitian_spectrum(uni.h1);
    joined << h0, h1;
    std::sort(joined.data(), joined.data() + joined.size());
    const double mismatch = spectrum_mismatch(joined, b.h().eigenvalues());
    r.metrics["spectrum_mismatch"] = mismatch;
    r.checks.push_back(make_check("spectrum_union", mismatch, "<=", cfg.tol("spectrum")));
    r.checks.push_back(
        make_check("similar_spectra", std::max(spectrum_mismatch(h0, sorted_real(sim.k0_spectrum)),
                                               spectrum_mismatch(h1, sorted_real(sim.k1_spectrum))),
                   "<=", cfg.tol("spectrum")));
    vector_metrics(r.metrics, "h0_spectrum", h0);
    vector_metrics(r.metrics, "h1_spectrum", h1);

    const double margin = vanishing_margin(b, q, s->hypothesis);
    r.metrics["region_margin"] = margin;
    r.metrics["min_margin"] = margin;
    switch (s->hypothesis) {
    case Hypothesis::henorm: {
        const double star = std::max(operator_norm(b.b01() * q.q10()), operator_norm(b.b10() * q.q01()));
        r.metrics["star_norm"] = star;
        r.checks.push_back(make_check("star", star, "<", s->h.d / 2.0));
        r.checks.push_back(make_check("region", margin, ">=", -cfg.tol("separation")));
        break;
    }
    case Hypothesis::hbpi:
        r.checks.push_back(make_check("strict_contraction", operator_norm(q.q10()), "<", 1.0));
        r.checks.push_back(make_check("region", margin, ">=", -cfg.tol("separation")));
        break;
    case Hypothesis::hadl: {
        r.checks.push_back(make_check("strict_contraction", operator_norm(q.q10()), "<", 1.0));
        r.checks.push_back(make_check("separation", margin, ">=", -cfg.tol("separation")));
        const AdlProjections p = adl_projections(b, q);
        r.metrics["adl_graph_defect"] = p.graph_defect;
        r.metrics["adl_spectral_defect"] = p.spectral_defect;
        const double proj = std::max({p.idempotency_defect, p.hermitian_defect, p.completeness_defect,
                                      p.graph_defect, p.complement_defect});
        r.checks.push_back(make_check("adl_projector", proj, "<=", cfg.tol("projector")));
        r.checks.push_back(make_check("adl_spectral", p.spectral_defect, "<=", cfg.tol("spectrum")));
        break;
    }
    }
    if (s->h.d > 0.0) {
        double worst = kInfinity;
        for (double p : {1.0, 2.0, kInfinity}) {
            worst = std::min(worst, schatten_inheritance_check(b, q, p));
        }
        r.metrics["schatten_margin"] = worst;
        r.checks.push_back(make_check("schatten_inheritance", worst, ">=", -cfg.tol("bound")));
    }
    r.metrics["max_residual"] = residual;
}

void run_ssf_split(const Context& ctx, const Instance& inst, TrialRecord& r)
{
    const auto& cfg = ctx.cfg;
    auto s = setup_block(ctx, inst, r);
    if (!s) {
        return;
    }
    const auto& b = s->b;
    const auto& q = s->q;
    r.checks.push_back(make_check("riccati_residual", r.metrics["riccati_residual"], "<=", cfg.tol("residual")));

    const SplittingReport split = splitting_check(b, q);
    r.metrics["splitting_difference"] = split.max_difference;
    r.metrics["breakpoints"] = static_cast<double>(split.full.breakpoints().size());
    r.checks.push_back(make_check("splitting_exact", split.max_difference, "==", 0.0));
    r.checks.push_back(make_check("splitting_mod_z", bool_value(split.modulo_integers), "==", 1.0));
    if (split.xi0.support()) {
        r.metrics["xi0_support_lo"] = split.xi0.support()->lo;
        r.metrics["xi0_support_hi"] = split.xi0.support()->hi;
        r.metrics["xi0_mid_value"] = split.xi0(0.5 * (split.xi0.support()->lo + split.xi0.support()->hi));
    }
    if (split.xi1.support()) {
        r.metrics["xi1_support_lo"] = split.xi1.support()->lo;
        r.metrics["xi1_support_hi"] = split.xi1.support()->hi;
        r.metrics["xi1_mid_value"] = split.xi1(0.5 * (split.xi1.support()->lo + split.xi1.support()->hi));
    }

    const auto violations = vanishing_check(b, q, s->hypothesis, spectral_grid(b, cfg.grid_points));
    r.metrics["vanishing_violations"] = static_cast<double>(violations.size());
    r.checks.push_back(make_check("vanishing", static_cast<double>(violations.size()), "==", 0.0));

    // argument of the perturbation determinant against counting at regular points
    Rng rng(derive_seed(r.seed, 1));
    const auto& h = b.h();
    const auto& a = b.diagonal_part();
    const StepFunction xi = counting_ssf(h, a);
    const double lo = std::min(h.min_eigenvalue(), a.min_eigenvalue()) - 1.0;
    const double hi = std::max(h.max_eigenvalue(), a.max_eigenvalue()) + 1.0;
    double worst_arg = 0.0;
    int tested = 0;
    for (int attempts = 0; tested < cfg.regular_points && attempts < 1000 * cfg.regular_points; ++attempts) {
        const double lambda = uniform(rng, lo, hi);
        if (std::min(distance_to_set(lambda, h.eigenvalues()), distance_to_set(lambda, a.eigenvalues())) < 0.05) {
            continue;
        }
        worst_arg = std::max(worst_arg, std::abs(ssf_via_argument(h, a, lambda) - xi(lambda)));
        ++tested;
    }
    r.metrics["argument_points"] = tested;
    r.metrics["argument_deviation"] = worst_arg;
    r.checks.push_back(make_check("argument", worst_arg, "<=", cfg.tol("argument")));

    // trace formula with bumps covering both spectra
    std::vector<TestFunction> bumps;
    const double center = 0.5 * (lo + hi);
    for (int k = 0; k < cfg.bump_count; ++k) {
        bumps.push_back(smooth_bump(center + uniform(rng, -0.25, 0.25), 0.5 * (hi - lo) + uniform(rng, 0.5, 2.0),
                                    uniform(rng, 0.5, 2.0)));
    }
    const TraceFormulaReport tr = trace_formula_check(h, a, bumps);
    r.metrics["trace_residual"] = tr.max_residual;
    r.checks.push_back(make_check("trace_formula", tr.max_residual, "<=", cfg.tol("trace")));

    // chain rule through a random intermediate, and stability under V = I + Q
    const double tol = merge_tolerance_for(std::max(h.decomposition().spectral_radius(), 1.0) * 10.0);
    const HermitianOperator m = random_hermitian(rng, h.dim(), std::max(1.0, h.decomposition().spectral_radius()));
    const int chain = max_difference(xi, add(counting_ssf(h, m), counting_ssf(m, a), tol), tol);
    r.checks.push_back(make_check("chain_rule", chain, "==", 0.0));
    // V^{-1} H V with V = I + Q is not Hermitian, but its spectrum is real
    const ComplexMatrix v = ComplexMatrix::Identity(h.dim(), h.dim()) + q.assembled();
    const ComplexMatrix similar = v.partialPivLu().solve(h.matrix() * v);
    const ComplexVector mu = Eigen::ComplexEigenSolver<ComplexMatrix>(similar, false).eigenvalues();
    r.metrics["similar_spectrum_imag"] = mu.imag().cwiseAbs().maxCoeff();
    r.checks.push_back(make_check("similar_spectrum_real", r.metrics["similar_spectrum_imag"], "<=",
                                  cfg.tol("spectrum") * (1.0 + h.decomposition().spectral_radius())));
    const int stability = max_difference(counting_ssf(sorted_real(mu), a.eigenvalues()), xi, tol);
    r.checks.push_back(make_check("stability", stability, "==", 0.0));

    r.metrics["max_residual"] = r.metrics["riccati_residual"];
    r.metrics["max_deviation"] = worst_arg;
}

void run_homotopy(const Context& ctx, const Instance& inst, TrialRecord& r)
{
    const auto& cfg = ctx.cfg;
    const BlockOperatorMatrix b = block_from(inst);
    const HypothesisReport h = hypothesis_report(b);
    hypothesis_metrics(h, r);
    if (!(h.henorm_holds || h.hbpi_holds || h.hadl_holds)) {
        r.status = "skipped";
        r.message = "no hypothesis (HEnorm, HBpi, HAdL) holds";
        return;
    }
    const HomotopyReport rep = homotopy_scan(b, cfg.t_count);
    r.route = angular_method_name(rep.method);
    double max_residual = 0.0;
    for (const auto& s : rep.samples) {
        max_residual = std::max(max_residual, s.residual);
    }
    r.metrics["max_step"] = rep.max_step;
    r.metrics["refined_max_step"] = rep.refined_max_step;
    r.metrics["refinement_ratio"] = rep.refinement_ratio;
    r.metrics["q_norm_final"] = rep.samples.back().q_norm;
    r.metrics["min_margin"] = rep.min_vanishing_margin;
    r.metrics["max_residual"] = max_residual;
    r.checks.push_back(make_check("residual", max_residual, "<=", cfg.tol("residual")));
    r.checks.push_back(make_check("region", rep.min_vanishing_margin, ">=", -cfg.tol("separation")));
    if (rep.max_step > 0.0) {
        r.checks.push_back(make_check("refinement_lo", rep.refinement_ratio, ">=", cfg.tol("refinement_lo")));
        r.checks.push_back(make_check("refinement_hi", rep.refinement_ratio, "<=", cfg.tol("refinement_hi")));
    }
    bool monotone = true;
    for (std::size_t k = 1; k < rep.samples.size(); ++k) {
        monotone = monotone && rep.samples[k].q_norm >= rep.samples[k - 1].q_norm;
    }
    r.metrics["monotone_q_norm"] = bool_value(monotone);

    // xi(.; H_t, A) vanishes at points outside every admissible region for all t
    const double radius = rep.hypothesis == Hypothesis::henorm ? h.d / 2.0 : h.d / std::numbers::pi;
    const auto grid = spectral_grid(b, cfg.grid_points / 10 + 2);
    int violations = 0;
    for (int k = 0; k < cfg.t_count; ++k) {
        const double t = static_cast<double>(k) / (cfg.t_count - 1);
        const BlockOperatorMatrix bt = b.scaled(t);
        const StepFunction xi = counting_ssf(bt.h(), bt.diagonal_part());
        for (double lambda : grid) {
            bool outside = false;
            if (rep.hypothesis == Hypothesis::hadl) {
                outside = lambda > h.hadl_gap->first && lambda < h.hadl_gap->second;
            } else {
                outside = distance_to_set(lambda, b.a0().eigenvalues()) > radius &&
                          distance_to_set(lambda, b.a1().eigenvalues()) > radius;
            }
            if (outside && xi(lambda) != 0) {
                ++violations;
            }
        }
    }
    r.metrics["common_gap_violations"] = violations;
    r.checks.push_back(make_check("common_gap_vanishing", violations, "==", 0.0));
}

// ---------------------------------------------------------------- friedrichs

void run_friedrichs(const Context& ctx, TrialRecord& r)
{
    const auto& cfg = ctx.cfg;
    const double d = cfg.d;
    const double b_norm = cfg.b_norms.at(static_cast<std::size_t>(r.trial) % cfg.b_norms.size());
    std::vector<Interval> support;
    if (cfg.support == "gap") {
        support = {Interval{-kInfinity, -d}, Interval{d, kInfinity}};
    } else if (cfg.support == "line") {
        support = {Interval{-kInfinity, kInfinity}};
    } else {
        throw ParseError("config: friedrichs support must be gap or line");
    }
    std::function<double(double)> profile;
    if (cfg.coupling == "lorentzian") {
        profile = [](double mu) { return 1.0 / (1.0 + mu * mu); };
    } else if (cfg.coupling == "constant") {
        profile = [](double) { return 1.0; };
    } else if (cfg.coupling == "sharpness") {
        const double eps = cfg.epsilon;
        profile = [d, eps](double mu) { return sharpness_profile(d, eps, mu); };
    } else {
        throw ParseError("config: friedrichs coupling must be lorentzian, constant or sharpness");
    }
    const double L = cfg.truncation * d;
    const FriedrichsModel unit(support, cfg.nodes, [&](double mu) { return Complex(profile(mu), 0.0); }, L);
    const double scale = b_norm / unit.coupling_norm();
    const FriedrichsModel model(support, cfg.nodes, [&](double mu) { return Complex(scale * profile(mu), 0.0); }, L);

    r.inputs = {{"support", cfg.support}, {"coupling", cfg.coupling}, {"d", d},     {"b_norm", b_norm},
                {"nodes", cfg.nodes},     {"truncation", L},          {"epsilon", cfg.epsilon}};
    r.metrics["gap"] = d;
    r.metrics["b_norm"] = model.coupling_norm();
    const auto sol = friedrichs_solve(model);
    r.metrics["solvable"] = bool_value(sol.has_value());
    if (sol) {
        r.metrics["root"] = sol->w;
        r.metrics["max_residual"] = sol->residual;
        r.checks.push_back(make_check("riccati_residual", sol->residual, "<=", 1e-9 * std::max(1.0, b_norm)));
    }
    if (cfg.support == "gap" && b_norm <= std::sqrt(2.0) * d) {
        r.checks.push_back(make_check("solvable_below_sqrt2", bool_value(sol.has_value()), "==", 1.0));
        if (sol) {
            r.checks.push_back(make_check("root_in_gap", std::abs(sol->w), "<", d));
        }
    }
    if (cfg.support == "line") {
        r.checks.push_back(make_check("no_root_on_line", bool_value(sol.has_value()), "==", 0.0));
    }
}

void run_sharpness(const Context& ctx, TrialRecord& r)
{
    const auto& cfg = ctx.cfg;
    const double c = cfg.c_values.at(static_cast<std::size_t>(r.trial));
    const SharpnessReport rep =
        friedrichs_sharpness(cfg.d, c, default_epsilon_grid(cfg.eps_count), cfg.nodes, cfg.truncation);
    r.inputs = {{"d", cfg.d}, {"c", c}, {"eps_count", cfg.eps_count}, {"nodes", cfg.nodes}, {"truncation", cfg.truncation}};
    r.route = rep.classification;
    int unsolvable = 0;
    double max_tail = 0.0;
    for (const auto& p : rep.points) {
        unsolvable += p.solvable ? 0 : 1;
        max_tail = std::max(max_tail, p.tail_bound);
    }
    r.metrics["gap"] = cfg.d;
    r.metrics["c"] = c;
    r.metrics["b_norm"] = std::sqrt(2.0) * c * cfg.d;
    r.metrics["unsolvable_count"] = unsolvable;
    r.metrics["max_tail_bound"] = max_tail;
    if (c <= 1.0) {
        r.checks.push_back(make_check("all_solvable", bool_value(rep.all_solvable), "==", 1.0));
    } else if (c >= 1.0 + cfg.sharpness_margin) {
        r.checks.push_back(make_check("some_unsolvable", bool_value(rep.any_unsolvable), "==", 1.0));
    }
    if (!ctx.trial_dir.empty()) {
        std::ofstream out(ctx.trial_dir / "sharpness.csv");
        out << "epsilon,b_norm,solvable,root,f_at_minus_d,f_at_plus_d,tail_bound\n" << std::setprecision(17);
        for (const auto& p : rep.points) {
            out << p.epsilon << ',' << p.b_norm << ',' << (p.solvable ? 1 : 0) << ','
                << (p.root ? std::to_string(*p.root) : std::string()) << ',' << p.f_at_minus_d << ','
                << p.f_at_plus_d << ',' << p.tail_bound << '\n';
        }
    }
}

nlohmann::json environment_stamp()
{
    return {{"library", "opshift 1.0.0"},
            {"compiler", __VERSION__},
            {"cplusplus", __cplusplus},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"boost", BOOST_LIB_VERSION}};
}

bool uses_instance(ExperimentKind k)
{
    return k != ExperimentKind::friedrichs && k != ExperimentKind::sharpness;
}

}  // namespace

CampaignReport run_experiment(const ExperimentConfig& cfg, bool write_files)
{
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    CampaignReport report;
    report.kind = kind_name(cfg.kind);
    report.config = to_json(cfg);
    report.environment = environment_stamp();

    const int trials = cfg.kind == ExperimentKind::sharpness ? static_cast<int>(cfg.c_values.size()) : cfg.trials;
    for (int trial = 0; trial < trials; ++trial) {
        const auto t0 = clock::now();
        TrialRecord r;
        r.trial = trial;
        r.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
        Context ctx{cfg, {}};
        if (write_files) {
            ctx.trial_dir = cfg.out / "trials" / trial_dir_name(trial);
            std::filesystem::create_directories(ctx.trial_dir);
        }
        try {
            if (uses_instance(cfg.kind)) {
                Instance inst = generate_instance(cfg, trial);
                if (!inst.manifest.contains("matrices")) {
                    nlohmann::json files = nlohmann::json::object();
                    for (const auto& m : inst.matrices) {
                        files[m.name] = m.name + ".mat";
                    }
                    inst.manifest["matrices"] = files;
                }
                r.inputs = inst.manifest;
                if (write_files) {
                    std::ofstream(ctx.trial_dir / "manifest.json") << inst.manifest.dump(2) << '\n';
                    if (cfg.write_matrices) {
                        for (const auto& m : inst.matrices) {
                            save_matrix(ctx.trial_dir / (m.name + ".mat"), m.entries, m.kind);
                        }
                    }
                }
                switch (cfg.kind) {
                case ExperimentKind::sylvester_bench: run_sylvester(ctx, inst, r); break;
                case ExperimentKind::riccati_solve: run_riccati(ctx, inst, r); break;
                case ExperimentKind::blockdiag: run_blockdiag(ctx, inst, r); break;
                case ExperimentKind::ssf_split: run_ssf_split(ctx, inst, r); break;
                case ExperimentKind::homotopy: run_homotopy(ctx, inst, r); break;
                default: break;
                }
                if (r.status != "skipped" && inst.manifest.contains("gap") && inst.manifest.contains("target_gap")) {
                    const double err = std::abs(inst.manifest["gap"].get<double>() -
                                                inst.manifest["target_gap"].get<double>());
                    r.checks.push_back(make_check("generated_gap", err, "<=", cfg.tol("gap")));
                }
            } else if (cfg.kind == ExperimentKind::friedrichs) {
                run_friedrichs(ctx, r);
            } else {
                run_sharpness(ctx, r);
            }
            if (r.status != "skipped") {
                apply_expectations(cfg, r);
            }
            finish(r);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            r.status = "error";
            r.message = e.what();
        }
        report.records.push_back(std::move(r));
        report.timing.trial_seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    }
    report.aggregate = aggregate_records(report.records);
    report.timing.total_seconds = std::chrono::duration<double>(clock::now() - start).count();
    return report;
}

}  // namespace opshift
