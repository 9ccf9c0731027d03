#include "opshift/ssf/ssf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "opshift/core/functions.hpp"
#include "opshift/core/norms.hpp"
#include "opshift/core/quadrature.hpp"

namespace opshift {

namespace {

double radius_of(const RealVector& a, const RealVector& b)
{
    double r = 0.0;
    if (a.size() > 0) {
        r = std::max(r, a.cwiseAbs().maxCoeff());
    }
    if (b.size() > 0) {
        r = std::max(r, b.cwiseAbs().maxCoeff());
    }
    return r;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m)
{
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

double bump_profile(double x)
{
    return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
}

double bump_derivative(double x)
{
    if (std::abs(x) >= 1.0) {
        return 0.0;
    }
    const double s = 1.0 - x * x;
    return std::exp(-1.0 / s) * (-2.0 * x / (s * s));
}

// Smooth transition from 0 (x <= 0) to 1 (x >= 1).
double smooth_step(double x)
{
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double smooth_step_derivative(double x)
{
    if (x <= 0.0 || x >= 1.0) {
        return 0.0;
    }
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    const double da = a / (x * x);
    const double db = -b / ((1.0 - x) * (1.0 - x));
    return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

}  // namespace

StepFunction counting_ssf(const RealVector& h_eigenvalues, const RealVector& a_eigenvalues)
{
    require_shape(h_eigenvalues.size() == a_eigenvalues.size(), "counting_ssf: H and A must have the same dimension");
    std::vector<std::pair<double, int>> jumps;
    for (Index i = 0; i < a_eigenvalues.size(); ++i) {
        jumps.emplace_back(a_eigenvalues(i), 1);
        jumps.emplace_back(h_eigenvalues(i), -1);
    }
    return StepFunction::from_jumps(std::move(jumps),
                                    merge_tolerance_for(radius_of(h_eigenvalues, a_eigenvalues)));
}

StepFunction counting_ssf(const HermitianOperator& h, const HermitianOperator& a)
{
    return counting_ssf(h.eigenvalues(), a.eigenvalues());
}

TestFunction smooth_bump(double center, double half_width, double height)
{
    TestFunction t;
    std::ostringstream name;
    name << "bump(" << center << "," << half_width << ")";
    t.name = name.str();
    t.f = [=](double x) { return height * bump_profile((x - center) / half_width); };
    t.df = [=](double x) { return height * bump_derivative((x - center) / half_width) / half_width; };
    t.support_lo = center - half_width;
    t.support_hi = center + half_width;
    return t;
}

TestFunction plateau_identity(double lo, double hi, double margin)
{
    auto chi = [=](double x) { return smooth_step((x - lo + margin) / margin) * smooth_step((hi + margin - x) / margin); };
    auto dchi = [=](double x) {
        const double l = (x - lo + margin) / margin;
        const double r = (hi + margin - x) / margin;
        return (smooth_step_derivative(l) * smooth_step(r) - smooth_step(l) * smooth_step_derivative(r)) / margin;
    };
    TestFunction t;
    t.name = "plateau_identity";
    t.f = [=](double x) { return x * chi(x); };
    t.df = [=](double x) { return chi(x) + x * dchi(x); };
    t.support_lo = lo - margin;
    t.support_hi = hi + margin;
    return t;
}

TraceFormulaReport trace_formula_check(const HermitianOperator& h, const HermitianOperator& a,
                                       const std::vector<TestFunction>& phis)
{
    const StepFunction xi = counting_ssf(h, a);
    const double lo = std::min(h.min_eigenvalue(), a.min_eigenvalue());
    const double hi = std::max(h.max_eigenvalue(), a.max_eigenvalue());
    TraceFormulaReport rep;
    for (const auto& phi : phis) {
        TraceCheck c;
        c.name = phi.name;
        c.covers_spectra = phi.support_lo < lo && hi < phi.support_hi;
        auto as_complex = [&](double x) { return Complex(phi.f(x), 0.0); };
        c.lhs = (apply_function(h, as_complex).trace() - apply_function(a, as_complex).trace()).real();
        c.exact_sum = xi.integrate_derivative(phi.f);
        const auto& bp = xi.breakpoints();
        for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
            const int v = xi.values()[k + 1];
            if (v != 0) {
                c.quadrature += v * adaptive_integral(phi.df, bp[k], bp[k + 1], 1e-10);
            }
        }
        c.residual = std::max(std::abs(c.lhs - c.exact_sum), std::abs(c.lhs - c.quadrature));
        rep.max_residual = std::max(rep.max_residual, c.residual);
        rep.all_cover = rep.all_cover && c.covers_spectra;
        rep.checks.push_back(c);
    }
    return rep;
}

Complex perturbation_determinant(const ComplexVector& eta, const ComplexVector& alpha, Complex z)
{
    require_shape(eta.size() == alpha.size(), "perturbation_determinant: dimension mismatch");
    // pairing each numerator with a denominator keeps partial products O(1)
    Complex d(1.0, 0.0);
    for (Index j = 0; j < eta.size(); ++j) {
        d *= (eta(j) - z) / (alpha(j) - z);
    }
    return d;
}

Complex perturbation_determinant(const HermitianOperator& h, const HermitianOperator& a, Complex z)
{
    if (z.imag() == 0.0) {
        throw PreconditionError("perturbation_determinant: Im z must be nonzero");
    }
    return perturbation_determinant(ComplexVector(h.eigenvalues().cast<Complex>()),
                                    ComplexVector(a.eigenvalues().cast<Complex>()), z);
}

Complex perturbation_determinant_dense(const ComplexMatrix& h, const ComplexMatrix& a, Complex z)
{
    require_shape(h.rows() == a.rows() && h.cols() == a.cols() && h.rows() == h.cols(),
                  "perturbation_determinant_dense: dimension mismatch");
    const ComplexMatrix id = ComplexMatrix::Identity(h.rows(), h.cols());
    return (h - z * id).partialPivLu().determinant() / (a - z * id).partialPivLu().determinant();
}

std::vector<double> default_eps_schedule()
{
    std::vector<double> eps;
    constexpr int per_decade = 8;
    for (int k = 0; k <= 8 * per_decade; ++k) {
        eps.push_back(std::pow(10.0, -static_cast<double>(k) / per_decade));
    }
    return eps;
}

double ssf_via_argument(const HermitianOperator& h, const HermitianOperator& a, double lambda,
                        const ArgumentOptions& opts, DeterminantTrace* trace)
{
    require_shape(h.dim() == a.dim(), "ssf_via_argument: dimension mismatch");
    const double dist = std::min(distance_to_set(lambda, h.eigenvalues()), distance_to_set(lambda, a.eigenvalues()));
    if (dist < opts.regularity_floor) {
        std::ostringstream msg;
        msg << "ssf_via_argument: lambda = " << lambda << " is within " << dist << " of the spectra";
        throw PreconditionError(msg.str());
    }
    std::vector<double> eps = opts.eps_schedule.empty() ? default_eps_schedule() : opts.eps_schedule;

    // |D - 1| <= exp(sum |eta_j - alpha_j| / eps) - 1 < 1/2 once eps >= 2.5 sum
    const double spread = (h.eigenvalues() - a.eigenvalues()).cwiseAbs().sum();
    const double anchor = std::max(2.5 * spread, eps.front());
    std::vector<double> path;
    for (double e = anchor; e > eps.front(); e /= 2.0) {
        path.push_back(e);
    }
    path.insert(path.end(), eps.begin(), eps.end());

    auto det = [&](double e) { return perturbation_determinant(h, a, Complex(lambda, e)); };
    DeterminantTrace local;
    DeterminantTrace& t = trace ? *trace : local;
    t = DeterminantTrace{};

    Complex prev = det(path.front());
    double arg = std::arg(prev);
    t.z.emplace_back(lambda, path.front());
    t.values.push_back(prev);
    t.argument.push_back(arg);

    // continue the branch from (e0, d0) to e1, bisecting while a step turns by more than pi/2
    std::function<double(double, Complex, double, Complex, int)> step =
        [&](double e0, Complex d0, double e1, Complex d1, int depth) -> double {
        const double turn = std::arg(d1 / d0);
        if (std::abs(turn) <= std::numbers::pi / 2.0) {
            return turn;
        }
        if (depth >= opts.max_refinements) {
            if (std::abs(turn) >= std::numbers::pi) {
                throw ConvergenceError("ssf_via_argument: argument jump could not be resolved");
            }
            return turn;
        }
        const double em = std::sqrt(e0 * e1);
        const Complex dm = det(em);
        return step(e0, d0, em, dm, depth + 1) + step(em, dm, e1, d1, depth + 1);
    };

    for (std::size_t k = 1; k < path.size(); ++k) {
        if (!(path[k] < path[k - 1])) {
            continue;
        }
        const Complex next = det(path[k]);
        arg += step(path[k - 1], prev, path[k], next, 0);
        prev = next;
        t.z.emplace_back(lambda, path[k]);
        t.values.push_back(next);
        t.argument.push_back(arg);
    }
    return arg / std::numbers::pi;
}

SplittingReport splitting_check(const BlockOperatorMatrix& b, const AngularOperator& q)
{
    const DiagonalizationResult diag = unitary_diagonalize(b, q);
    SplittingReport rep;
    rep.riccati_residual = block_riccati_residual(b, q);
    rep.full = counting_ssf(b.h(), b.diagonal_part());
    rep.xi0 = counting_ssf(hermitian_eigenvalues(diag.h0), b.a0().eigenvalues());
    rep.xi1 = counting_ssf(hermitian_eigenvalues(diag.h1), b.a1().eigenvalues());
    const double tol = merge_tolerance_for(std::max(b.h().decomposition().spectral_radius(),
                                                    b.diagonal_part().decomposition().spectral_radius()));
    const StepFunction sum = add(rep.xi0, rep.xi1, tol);
    rep.max_difference = max_difference(rep.full, sum, tol);
    rep.exact = rep.max_difference == 0;
    rep.modulo_integers = equal_modulo_integers(rep.full, sum, tol);
    return rep;
}

std::vector<Violation> vanishing_check(const BlockOperatorMatrix& b, const AngularOperator& q, Hypothesis h,
                                       const std::vector<double>& grid)
{
    const SplittingReport s = splitting_check(b, q);
    const HypothesisReport r = hypothesis_report(b);
    std::vector<Violation> out;
    auto must_vanish = [&](int channel, double lambda) {
        const RealVector& spec = channel == 0 ? b.a0().eigenvalues() : b.a1().eigenvalues();
        switch (h) {
        case Hypothesis::henorm: return distance_to_set(lambda, spec) > r.d / 2.0;
        case Hypothesis::hbpi: return distance_to_set(lambda, spec) > r.d / std::numbers::pi;
        case Hypothesis::hadl:
            if (!r.hadl_gap) {
                return false;
            }
            return channel == r.lower_block ? lambda >= r.hadl_gap->second : lambda <= r.hadl_gap->first;
        }
        return false;
    };
    for (double lambda : grid) {
        for (int channel = 0; channel < 2; ++channel) {
            const int v = channel == 0 ? s.xi0(lambda) : s.xi1(lambda);
            if (v != 0 && must_vanish(channel, lambda)) {
                out.push_back({lambda, channel, v});
            }
        }
    }
    return out;
}

std::vector<double> spectral_grid(const BlockOperatorMatrix& b, int count)
{
    const HypothesisReport r = hypothesis_report(b);
    const double margin = std::max(r.d, 1.0);
    const double lo = std::min(b.h().min_eigenvalue(), b.diagonal_part().min_eigenvalue()) - margin;
    const double hi = std::max(b.h().max_eigenvalue(), b.diagonal_part().max_eigenvalue()) + margin;
    std::vector<double> grid(static_cast<std::size_t>(std::max(count, 2)));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    }
    return grid;
}

}  // namespace opshift
