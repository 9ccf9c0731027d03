#include "opshift/graph/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "opshift/core/functions.hpp"
#include "opshift/core/norms.hpp"

namespace opshift {

namespace {

RiccatiProblem riccati_for(const BlockOperatorMatrix& b)
{
    return {b.a0(), b.a1(), b.b01(), b.b10()};
}

RiccatiProblem swapped_riccati_for(const BlockOperatorMatrix& b)
{
    return {b.a1(), b.a0(), b.b10(), b.b01()};
}

ComplexMatrix identity(Index n)
{
    return ComplexMatrix::Identity(n, n);
}

ComplexMatrix spectral_angular(const BlockOperatorMatrix& b, const HypothesisReport& r)
{
    if (!r.hadl_gap) {
        throw PreconditionError("solve_angular(spectral): the diagonal blocks are not ordered");
    }
    const Index n0 = b.n0();
    const Index n1 = b.n1();
    const Index lower = r.lower_block == 0 ? n0 : n1;
    const auto& dec = b.h().decomposition();
    const ComplexMatrix w = dec.eigenvectors().leftCols(lower);
    const auto [a0, a1] = *r.hadl_gap;
    const double tol = 1e-9 * (1.0 + dec.spectral_radius());
    if (dec.eigenvalues()(lower - 1) > a0 + tol ||
        (lower < n0 + n1 && dec.eigenvalues()(lower) < a1 - tol)) {
        throw SingularityError("solve_angular(spectral): spectrum of H does not split at the gap");
    }
    if (r.lower_block == 0) {
        const ComplexMatrix w0 = w.topRows(n0);
        Eigen::PartialPivLU<ComplexMatrix> lu(w0.adjoint());
        if (lu.rcond() < 1e-12) {
            throw SingularityError("solve_angular(spectral): spectral subspace is not a graph over H0");
        }
        // Q10 W0 = W1
        return lu.solve(w.bottomRows(n1).adjoint()).adjoint();
    }
    const ComplexMatrix w1 = w.bottomRows(n1);
    Eigen::PartialPivLU<ComplexMatrix> lu(w1.adjoint());
    if (lu.rcond() < 1e-12) {
        throw SingularityError("solve_angular(spectral): spectral subspace is not a graph over H1");
    }
    const ComplexMatrix q01 = lu.solve(w.topRows(n0).adjoint()).adjoint();
    return -q01.adjoint();
}

ComplexMatrix hermitian_power(const ComplexMatrix& m, double power)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    const RealVector values = es.eigenvalues().array().pow(power).matrix();
    return es.eigenvectors() * values.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexVector eigenvalues_of(const ComplexMatrix& m)
{
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
    return es.eigenvalues();
}

void require_residual(const BlockOperatorMatrix& b, const AngularOperator& q, const char* what)
{
    const double r = block_riccati_residual(b, q);
    if (!(r <= kDiagonalizationResidual)) {
        std::ostringstream msg;
        msg << what << ": Q10 does not solve the block Riccati equation (residual " << r << ")";
        throw PreconditionError(msg.str());
    }
}

double max_distance_to_spectrum(const ComplexVector& values, const RealVector& spectrum)
{
    double worst = 0.0;
    for (Index i = 0; i < values.size(); ++i) {
        const double x = values(i).real();
        worst = std::max(worst, std::hypot(distance_to_set(x, spectrum), values(i).imag()));
    }
    return worst;
}

}  // namespace

std::string angular_method_name(AngularMethod m)
{
    switch (m) {
    case AngularMethod::automatic: return "automatic";
    case AngularMethod::stieltjes: return "stieltjes";
    case AngularMethod::fourier: return "fourier";
    case AngularMethod::spectral: return "spectral";
    }
    return "unknown";
}

Hypothesis hypothesis_for(AngularMethod m)
{
    switch (m) {
    case AngularMethod::fourier: return Hypothesis::hbpi;
    case AngularMethod::spectral: return Hypothesis::hadl;
    default: return Hypothesis::henorm;
    }
}

AngularMethod select_method(const HypothesisReport& r)
{
    if (r.henorm_holds) {
        return AngularMethod::stieltjes;
    }
    if (r.hbpi_holds) {
        return AngularMethod::fourier;
    }
    if (r.hadl_holds) {
        return AngularMethod::spectral;
    }
    throw PreconditionError("solve_angular: none of HEnorm, HBpi, HAdL holds");
}

AngularOperator solve_angular(const BlockOperatorMatrix& b, AngularMethod method, const AngularOptions& opts)
{
    const HypothesisReport r = hypothesis_report(b);
    if (method == AngularMethod::automatic) {
        method = select_method(r);
    } else if (!r.holds(hypothesis_for(method)) && !opts.override_hypothesis) {
        throw PreconditionError("solve_angular(" + angular_method_name(method) + "): " +
                                hypothesis_name(hypothesis_for(method)) + " does not hold");
    }
    if (r.b_norm == 0.0) {
        return AngularOperator(ComplexMatrix::Zero(b.n1(), b.n0()), angular_method_name(method));
    }
    RiccatiOptions ropts = opts.riccati;
    ropts.override_certificate = ropts.override_certificate || opts.override_hypothesis;

    switch (method) {
    case AngularMethod::stieltjes:
        if (r.ec_norm_a0 < r.ec_norm_a1) {
            const RiccatiSolution s = iterate_stieltjes(swapped_riccati_for(b), std::nullopt, ropts);
            return AngularOperator(-s.q.adjoint(), "stieltjes-dual");
        } else {
            const RiccatiSolution s = iterate_stieltjes(riccati_for(b), std::nullopt, ropts);
            return AngularOperator(s.q, "stieltjes");
        }
    case AngularMethod::fourier: {
        const RiccatiSolution s = iterate_fourier(riccati_for(b), std::nullopt, ropts);
        return AngularOperator(s.q, "fourier");
    }
    case AngularMethod::spectral:
        return AngularOperator(spectral_angular(b, r), "spectral");
    case AngularMethod::automatic:
        break;
    }
    throw PreconditionError("solve_angular: no method selected");
}

DiagonalizationResult similarity_diagonalize(const BlockOperatorMatrix& b, const AngularOperator& q)
{
    require_residual(b, q, "similarity_diagonalize");
    const Index n0 = b.n0();
    const Index n1 = b.n1();
    DiagonalizationResult res;
    res.v = identity(n0 + n1) + q.assembled();
    res.k0 = b.a0().matrix() + b.b01() * q.q10();
    res.k1 = b.a1().matrix() + b.b10() * q.q01();
    res.k0_spectrum = eigenvalues_of(res.k0);
    res.k1_spectrum = eigenvalues_of(res.k1);

    const ComplexMatrix t = res.v.partialPivLu().solve(b.h().matrix() * res.v);
    res.offdiag_residual =
        std::max(operator_norm(t.topRightCorner(n0, n1)), operator_norm(t.bottomLeftCorner(n1, n0)));
    res.block_deviation = std::max(operator_norm(t.topLeftCorner(n0, n0) - res.k0),
                                   operator_norm(t.bottomRightCorner(n1, n1) - res.k1));
    return res;
}

DiagonalizationResult unitary_diagonalize(const BlockOperatorMatrix& b, const AngularOperator& q)
{
    DiagonalizationResult res = similarity_diagonalize(b, q);
    const Index n0 = b.n0();
    const Index n1 = b.n1();
    const ComplexMatrix& q10 = q.q10();
    const ComplexMatrix q01 = q.q01();

    // VV^* = diag(I + Q01 Q01^*, I + Q10 Q10^*)
    const ComplexMatrix g0 = identity(n0) + q01 * q01.adjoint();
    const ComplexMatrix g1 = identity(n1) + q10 * q10.adjoint();
    res.vv_structure_defect = operator_norm(res.v * res.v.adjoint() - block_diagonal(g0, g1));

    const ComplexMatrix abs_inv = block_diagonal(hermitian_power(g0, -0.5), hermitian_power(g1, -0.5));
    res.u = res.v * abs_inv;
    res.unitarity_defect = operator_norm(res.u.adjoint() * res.u - identity(n0 + n1));

    const ComplexMatrix t = res.u.adjoint() * b.h().matrix() * res.u;
    res.offdiag_residual =
        std::max(operator_norm(t.topRightCorner(n0, n1)), operator_norm(t.bottomLeftCorner(n1, n0)));
    const ComplexMatrix raw0 = t.topLeftCorner(n0, n0);
    const ComplexMatrix raw1 = t.bottomRightCorner(n1, n1);
    res.hermitian_defect = std::max(opshift::hermitian_defect(raw0), opshift::hermitian_defect(raw1));
    res.h0 = 0.5 * (raw0 + raw0.adjoint());
    res.h1 = 0.5 * (raw1 + raw1.adjoint());

    // H_i = (I + Q_ji^* Q_ji)^{1/2} K_i (I + Q_ji^* Q_ji)^{-1/2}
    const ComplexMatrix s0 = identity(n0) + q10.adjoint() * q10;
    const ComplexMatrix s1 = identity(n1) + q01.adjoint() * q01;
    const ComplexMatrix hip0 = hermitian_power(s0, 0.5) * res.k0 * hermitian_power(s0, -0.5);
    const ComplexMatrix hip1 = hermitian_power(s1, 0.5) * res.k1 * hermitian_power(s1, -0.5);
    res.block_deviation = std::max(operator_norm(res.h0 - hip0), operator_norm(res.h1 - hip1));
    return res;
}

ComplexMatrix graph_projector_upper(const GeneralOperator& q01)
{
    const Index n0 = q01.rows();
    const Index n1 = q01.cols();
    ComplexMatrix w(n0 + n1, n1);
    w.topRows(n0) = q01;
    w.bottomRows(n1).setIdentity();
    const ComplexMatrix gram = w.adjoint() * w;
    return w * gram.llt().solve(w.adjoint());
}

ComplexMatrix adl_lower_formula(const GeneralOperator& q)
{
    const Index n0 = q.rows();
    const Index n1 = q.cols();
    const ComplexMatrix inv = (identity(n0) + q * q.adjoint()).inverse();
    ComplexMatrix e(n0 + n1, n0 + n1);
    e.topLeftCorner(n0, n0) = inv;
    e.topRightCorner(n0, n1) = -inv * q;
    e.bottomLeftCorner(n1, n0) = -q.adjoint() * inv;
    e.bottomRightCorner(n1, n1) = q.adjoint() * inv * q;
    return e;
}

ComplexMatrix adl_upper_formula(const GeneralOperator& q)
{
    const Index n0 = q.rows();
    const Index n1 = q.cols();
    const ComplexMatrix inv = (identity(n1) + q.adjoint() * q).inverse();
    ComplexMatrix e(n0 + n1, n0 + n1);
    e.topLeftCorner(n0, n0) = q * inv * q.adjoint();
    e.topRightCorner(n0, n1) = q * inv;
    e.bottomLeftCorner(n1, n0) = inv * q.adjoint();
    e.bottomRightCorner(n1, n1) = inv;
    return e;
}

AdlProjections adl_projections(const BlockOperatorMatrix& b, const AngularOperator& q)
{
    const HypothesisReport r = hypothesis_report(b);
    if (!r.hadl_gap) {
        throw PreconditionError("adl_projections: the diagonal blocks are not ordered");
    }
    const Index n = b.n0() + b.n1();
    const ComplexMatrix q01 = q.q01();
    // projectors onto G(H0, Q10) and G(H1, Q01)
    const ComplexMatrix p0 = adl_lower_formula(q01);
    const ComplexMatrix p1 = adl_upper_formula(q01);

    AdlProjections out;
    out.lower_block = r.lower_block;
    std::tie(out.a0, out.a1) = *r.hadl_gap;
    out.lower = r.lower_block == 0 ? p0 : p1;
    out.upper = r.lower_block == 0 ? p1 : p0;
    out.idempotency_defect = std::max(operator_norm(p0 * p0 - p0), operator_norm(p1 * p1 - p1));
    out.hermitian_defect = std::max(opshift::hermitian_defect(p0), opshift::hermitian_defect(p1));
    out.completeness_defect = operator_norm(p0 + p1 - identity(n));
    out.graph_defect = std::max(operator_norm(p0 - graph_projector(q.q10())),
                                operator_norm(p1 - graph_projector_upper(q01)));
    // G(H0, Q10)^perp = G(H1, -Q10^*), built independently of the block formulas
    out.complement_defect = operator_norm(identity(n) - graph_projector(q.q10()) - graph_projector_upper(q01));
    const double mid = 0.5 * (out.a0 + out.a1);
    const ComplexMatrix e = b.h().decomposition().projector(Interval{-kInfinity, mid});
    out.spectral_defect = operator_norm(out.lower - e);
    return out;
}

double vanishing_margin(const BlockOperatorMatrix& b, const AngularOperator& q, Hypothesis h)
{
    const ComplexVector s0 = eigenvalues_of(b.a0().matrix() + b.b01() * q.q10());
    const ComplexVector s1 = eigenvalues_of(b.a1().matrix() + b.b10() * q.q01());
    const HypothesisReport r = hypothesis_report(b);
    switch (h) {
    case Hypothesis::henorm:
    case Hypothesis::hbpi: {
        const double radius = h == Hypothesis::henorm ? r.d / 2.0 : r.d / std::numbers::pi;
        const double worst = std::max(max_distance_to_spectrum(s0, b.a0().eigenvalues()),
                                      max_distance_to_spectrum(s1, b.a1().eigenvalues()));
        return radius - worst;
    }
    case Hypothesis::hadl: {
        if (!r.hadl_gap) {
            return -kInfinity;
        }
        const auto [a0, a1] = *r.hadl_gap;
        const ComplexVector& lo = r.lower_block == 0 ? s0 : s1;
        const ComplexVector& hi = r.lower_block == 0 ? s1 : s0;
        double margin = kInfinity;
        for (Index i = 0; i < lo.size(); ++i) {
            margin = std::min(margin, a0 - lo(i).real() - std::abs(lo(i).imag()));
        }
        for (Index i = 0; i < hi.size(); ++i) {
            margin = std::min(margin, hi(i).real() - a1 - std::abs(hi(i).imag()));
        }
        return margin;
    }
    }
    return -kInfinity;
}

namespace {

struct GridRun {
    std::vector<HomotopySample> samples;
    std::vector<ComplexMatrix> q;
    double max_step = 0.0;
};

GridRun run_grid(const BlockOperatorMatrix& b, int count, AngularMethod method, Hypothesis h,
                 const AngularOptions& opts)
{
    GridRun run;
    for (int k = 0; k < count; ++k) {
        const double t = count == 1 ? 1.0 : static_cast<double>(k) / (count - 1);
        const BlockOperatorMatrix bt = b.scaled(t);
        const AngularOperator q = solve_angular(bt, method, opts);
        HomotopySample s;
        s.t = t;
        s.q_norm = operator_norm(q.q10());
        s.residual = block_riccati_residual(bt, q);
        s.vanishing_margin = vanishing_margin(bt, q, h);
        run.samples.push_back(s);
        if (!run.q.empty()) {
            run.max_step = std::max(run.max_step, operator_norm(q.q10() - run.q.back()));
        }
        run.q.push_back(q.q10());
    }
    return run;
}

}  // namespace

HomotopyReport homotopy_scan(const BlockOperatorMatrix& b, int t_count, const AngularOptions& opts)
{
    if (t_count < 2) {
        throw PreconditionError("homotopy_scan: need at least two grid points");
    }
    HomotopyReport rep;
    rep.method = select_method(hypothesis_report(b));
    rep.hypothesis = hypothesis_for(rep.method);

    const GridRun coarse = run_grid(b, t_count, rep.method, rep.hypothesis, opts);
    const GridRun fine = run_grid(b, 2 * t_count - 1, rep.method, rep.hypothesis, opts);
    rep.samples = coarse.samples;
    rep.max_step = coarse.max_step;
    rep.refined_max_step = fine.max_step;
    rep.refinement_ratio = fine.max_step > 0.0 ? coarse.max_step / fine.max_step : 0.0;
    rep.min_vanishing_margin = kInfinity;
    for (const auto& s : fine.samples) {
        rep.min_vanishing_margin = std::min(rep.min_vanishing_margin, s.vanishing_margin);
    }
    return rep;
}

double schatten_inheritance_check(const BlockOperatorMatrix& b, const AngularOperator& q, double p)
{
    const double d = spec_distance(b.a0(), b.a1());
    if (!(d > 0.0)) {
        throw PreconditionError("schatten_inheritance_check: the diagonal blocks share spectrum");
    }
    const ComplexMatrix& q10 = q.q10();
    const ComplexMatrix rhs = b.b10() - q10 * b.b01() * q10;
    return std::numbers::pi / (2.0 * d) * schatten_norm(rhs, p) - schatten_norm(q10, p);
}

}  // namespace opshift
