#include "opshift/sylvester/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "opshift/core/functions.hpp"
#include "opshift/core/norms.hpp"
#include "opshift/core/quadrature.hpp"

namespace opshift {

namespace {

ComplexMatrix shifted(const HermitianOperator& m, Complex z)
{
    ComplexMatrix s = m.matrix();
    s.diagonal().array() -= z;
    return s;
}

/// X = V_C (V_C^* Y V_A  o  W) V_A^* with W(k, l) = w(lambda_l - mu_k).
template <class Weight>
ComplexMatrix eigenbasis_solve(const SylvesterProblem& p, Weight&& w)
{
    const auto& dc = p.c().decomposition();
    const auto& da = p.a().decomposition();
    ComplexMatrix yh = dc.eigenvectors().adjoint() * p.y() * da.eigenvectors();
    for (Index l = 0; l < yh.cols(); ++l) {
        for (Index k = 0; k < yh.rows(); ++k) {
            yh(k, l) *= w(da.eigenvalues()(l) - dc.eigenvalues()(k));
        }
    }
    return dc.eigenvectors() * yh * da.eigenvectors().adjoint();
}

double max_frequency(const SylvesterProblem& p)
{
    const RealVector& a = p.a().eigenvalues();
    const RealVector& c = p.c().eigenvalues();
    return std::max(std::abs(a(a.size() - 1) - c(0)), std::abs(c(c.size() - 1) - a(0)));
}

}  // namespace

GeneralOperator solve_oracle(const SylvesterProblem& p)
{
    const Index m = p.c().dim();
    const Index n = p.a().dim();
    const ComplexMatrix im = ComplexMatrix::Identity(m, m);
    const ComplexMatrix in = ComplexMatrix::Identity(n, n);
    const ComplexMatrix a_t = p.a().matrix().transpose();
    const ComplexMatrix op = Eigen::kroneckerProduct(a_t, im).eval() - Eigen::kroneckerProduct(in, p.c().matrix()).eval();
    Eigen::PartialPivLU<ComplexMatrix> lu(op);
    if (!(lu.rcond() > 1e-14)) {
        std::ostringstream msg;
        msg << "solve_oracle: Sylvester operator is singular (rcond " << lu.rcond() << ", gap " << p.gap() << ")";
        throw SingularityError(msg.str());
    }
    const ComplexVector x = lu.solve(p.y().reshaped());
    return x.reshaped(m, n);
}

GeneralOperator solve_stieltjes(const SylvesterProblem& p, bool dual)
{
    p.require_gap("solve_stieltjes");
    const auto& dc = p.c().decomposition();
    const Index m = p.c().dim();
    const Index n = p.a().dim();
    ComplexMatrix out = dual ? ComplexMatrix::Zero(n, m) : ComplexMatrix::Zero(m, n);
    for (std::size_t k = 0; k < dc.clusters().size(); ++k) {
        const double mu = dc.clusters()[k].value;
        const ComplexMatrix r = Eigen::PartialPivLU<ComplexMatrix>(shifted(p.a(), mu)).inverse();
        const ComplexMatrix proj = dc.cluster_projector(k);
        if (dual) {
            out -= r * p.y().adjoint() * proj;
        } else {
            out += proj * p.y() * r;
        }
    }
    return out;
}

GeneralOperator solve_double_stieltjes(const SylvesterProblem& p)
{
    p.require_gap("solve_double_stieltjes");
    const auto& dc = p.c().decomposition();
    const auto& da = p.a().decomposition();
    std::vector<ComplexMatrix> pa;
    for (std::size_t l = 0; l < da.clusters().size(); ++l) {
        pa.push_back(da.cluster_projector(l));
    }
    ComplexMatrix x = ComplexMatrix::Zero(p.y().rows(), p.y().cols());
    for (std::size_t k = 0; k < dc.clusters().size(); ++k) {
        const ComplexMatrix left = dc.cluster_projector(k) * p.y();
        for (std::size_t l = 0; l < da.clusters().size(); ++l) {
            x += left * pa[l] / (da.clusters()[l].value - dc.clusters()[k].value);
        }
    }
    return x;
}

ContourSpec default_contour(const SylvesterProblem& p)
{
    p.require_gap("default_contour");
    const auto& dc = p.c().decomposition();
    const RealVector& a = p.a().eigenvalues();
    const RealVector& c = p.c().eigenvalues();
    ContourSpec spec;
    for (const auto& cl : dc.clusters()) {
        double nearest = distance_to_set(cl.value, a);
        for (Index j = 0; j < c.size(); ++j) {
            if (j < cl.begin || j >= cl.end) {
                nearest = std::min(nearest, std::abs(c(j) - cl.value));
            }
        }
        spec.circles.push_back({Complex(cl.value, 0.0), 0.5 * nearest});
    }
    return spec;
}

double winding_number(const ContourSpec& c, Complex point, int nodes_per_circle)
{
    double total = 0.0;
    for (const auto& circle : c.circles) {
        Complex prev = circle.center + circle.radius - point;
        for (int j = 1; j <= nodes_per_circle; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / nodes_per_circle * c.orientation;
            const Complex next = circle.center + circle.radius * std::polar(1.0, theta) - point;
            total += std::arg(next / prev);
            prev = next;
        }
    }
    return total / (2.0 * std::numbers::pi);
}

GeneralOperator solve_contour(const SylvesterProblem& p, const ContourSpec& spec)
{
    if (spec.circles.empty() || spec.initial_nodes < 4) {
        throw PreconditionError("solve_contour: need at least one circle and 4 nodes");
    }
    // a union of circles must wind once around spec C and not at all around spec A
    constexpr int kWindingNodes = 512;
    for (Index j = 0; j < p.c().dim(); ++j) {
        if (std::abs(winding_number(spec, p.c().eigenvalues()(j), kWindingNodes) - 1.0) > 1e-6) {
            throw PreconditionError("solve_contour: contour does not wind once around every eigenvalue of C");
        }
    }
    for (Index j = 0; j < p.a().dim(); ++j) {
        if (std::abs(winding_number(spec, p.a().eigenvalues()(j), kWindingNodes)) > 1e-6) {
            throw PreconditionError("solve_contour: contour winds around an eigenvalue of A");
        }
    }

    auto check_clearance = [&](Complex z, double radius) {
        const double floor = 1e-3 * radius;
        if (std::hypot(distance_to_set(z.real(), p.a().eigenvalues()), z.imag()) < floor ||
            std::hypot(distance_to_set(z.real(), p.c().eigenvalues()), z.imag()) < floor) {
            throw PreconditionError("solve_contour: quadrature node too close to the spectrum");
        }
    };

    // r e^{i theta} (zeta - C)^{-1} Y (A - zeta)^{-1}
    auto term = [&](const Circle& circle, double theta) {
        const Complex e = std::polar(1.0, theta);
        const Complex zeta = circle.center + circle.radius * e;
        check_clearance(zeta, circle.radius);
        const ComplexMatrix left = Eigen::PartialPivLU<ComplexMatrix>(-shifted(p.c(), zeta)).solve(p.y());
        const ComplexMatrix right = Eigen::PartialPivLU<ComplexMatrix>(shifted(p.a(), zeta)).inverse();
        return ComplexMatrix(circle.radius * e * left * right);
    };

    const double sign = spec.orientation >= 0 ? 1.0 : -1.0;
    std::vector<ComplexMatrix> sums;
    int n = spec.initial_nodes;
    for (const auto& circle : spec.circles) {
        ComplexMatrix s = ComplexMatrix::Zero(p.y().rows(), p.y().cols());
        for (int j = 0; j < n; ++j) {
            s += term(circle, sign * 2.0 * std::numbers::pi * j / n);
        }
        sums.push_back(std::move(s));
    }
    auto estimate = [&](int nodes) {
        ComplexMatrix x = ComplexMatrix::Zero(p.y().rows(), p.y().cols());
        for (const auto& s : sums) {
            x += s;
        }
        return ComplexMatrix(sign * x / static_cast<double>(nodes));
    };

    ComplexMatrix current = estimate(n);
    while (2 * n <= spec.max_nodes) {
        for (std::size_t c = 0; c < spec.circles.size(); ++c) {
            for (int j = 0; j < n; ++j) {
                sums[c] += term(spec.circles[c], sign * std::numbers::pi * (2 * j + 1) / n);
            }
        }
        n *= 2;
        ComplexMatrix next = estimate(n);
        const double change = (next - current).norm();
        current = std::move(next);
        if (change <= spec.tolerance * current.norm()) {
            return current;
        }
    }
    std::ostringstream msg;
    msg << "solve_contour: trapezoid sums not converged at " << n << " nodes per circle";
    throw ConvergenceError(msg.str());
}

GeneralOperator solve_contour(const SylvesterProblem& p)
{
    return solve_contour(p, default_contour(p));
}

GeneralOperator solve_exponential(const SylvesterProblem& p)
{
    const double d = p.a().min_eigenvalue() - p.c().max_eigenvalue();
    if (!(d > kGapTolerance)) {
        std::ostringstream msg;
        msg << "solve_exponential: needs max spec C < min spec A (difference " << d << ")";
        throw PreconditionError(msg.str());
    }
    const double ynorm = operator_norm(p.y());
    if (ynorm == 0.0) {
        return ComplexMatrix::Zero(p.y().rows(), p.y().cols());
    }
    const double horizon = std::max(std::log(ynorm / (d * 1e-12)) / d, 1.0 / d);
    const double fastest = p.a().max_eigenvalue() - p.c().min_eigenvalue();
    const QuadratureRule rule = graded_gauss_legendre(horizon, 1.0 / fastest);
    return eigenbasis_solve(p, [&](double x) {
        double sum = 0.0;
        for (std::size_t j = 0; j < rule.size(); ++j) {
            sum += rule.weights[j] * std::exp(-x * rule.nodes[j]);
        }
        return sum;
    });
}

FourierKernel kernel_for(const SylvesterProblem& p)
{
    p.require_gap("kernel_for");
    return FourierKernel(p.gap(), max_frequency(p));
}

GeneralOperator solve_fourier(const SylvesterProblem& p, const FourierKernel& k)
{
    p.require_gap("solve_fourier");
    if (!k.valid()) {
        std::ostringstream msg;
        msg << "solve_fourier: kernel fails the transform check (error " << k.transform_error() << ")";
        throw PreconditionError(msg.str());
    }
    if (p.gap() < k.gap() * (1.0 - 1e-12)) {
        throw PreconditionError("solve_fourier: problem gap is smaller than the kernel gap");
    }
    if (max_frequency(p) > k.max_frequency() * (1.0 + 1e-12)) {
        throw PreconditionError("solve_fourier: spectral spread exceeds the kernel bandwidth");
    }
    return eigenbasis_solve(p, [&](double x) { return k.transfer(x); });
}

GeneralOperator solve_fourier(const SylvesterProblem& p)
{
    return solve_fourier(p, kernel_for(p));
}

std::string method_name(SylvesterMethod m)
{
    switch (m) {
    case SylvesterMethod::oracle: return "oracle";
    case SylvesterMethod::stieltjes: return "stieltjes";
    case SylvesterMethod::stieltjes_dual: return "stieltjes_dual";
    case SylvesterMethod::double_stieltjes: return "double_stieltjes";
    case SylvesterMethod::contour: return "contour";
    case SylvesterMethod::exponential: return "exponential";
    case SylvesterMethod::fourier: return "fourier";
    }
    return "unknown";
}

bool applicable(const SylvesterProblem& p, SylvesterMethod m)
{
    if (m == SylvesterMethod::oracle) {
        return true;
    }
    if (m == SylvesterMethod::exponential) {
        return p.a().min_eigenvalue() - p.c().max_eigenvalue() > kGapTolerance;
    }
    return p.gap() > kGapTolerance;
}

GeneralOperator solve(const SylvesterProblem& p, SylvesterMethod m)
{
    switch (m) {
    case SylvesterMethod::oracle: return solve_oracle(p);
    case SylvesterMethod::stieltjes: return solve_stieltjes(p, false);
    case SylvesterMethod::stieltjes_dual: return -solve_stieltjes(p, true).adjoint();
    case SylvesterMethod::double_stieltjes: return solve_double_stieltjes(p);
    case SylvesterMethod::contour: return solve_contour(p);
    case SylvesterMethod::exponential: return solve_exponential(p);
    case SylvesterMethod::fourier: return solve_fourier(p);
    }
    throw PreconditionError("solve: unknown method");
}

SolverReport run_solver(const SylvesterProblem& p, SylvesterMethod m, const GeneralOperator& oracle)
{
    SolverReport r;
    r.method = method_name(m);
    const auto start = std::chrono::steady_clock::now();
    const ComplexMatrix x = solve(p, m);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.residual = sylvester_residual(p, x);
    const double scale = oracle.norm();
    r.oracle_deviation = (x - oracle).norm() / (scale > 0.0 ? scale : 1.0);
    r.bound_margins = bound_margins(p, x);
    return r;
}

}  // namespace opshift
