#include "opshift/riccati/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "opshift/core/norms.hpp"

namespace opshift {

namespace {

double gap_after_coupling(const RiccatiProblem& p, const GeneralOperator& q)
{
    const ComplexMatrix k = p.a().matrix() + p.b() * q;
    const Eigen::ComplexEigenSolver<ComplexMatrix> es(k, false);
    const RealVector& c = p.c().eigenvalues();
    double best = kInfinity;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex z = es.eigenvalues()(i);
        for (Index j = 0; j < c.size(); ++j) {
            best = std::min(best, std::abs(z - c(j)));
        }
    }
    return best;
}

RiccatiSolution fixed_point(const RiccatiProblem& p, const std::optional<GeneralOperator>& q0,
                            const RiccatiOptions& opts, const char* name,
                            const std::function<GeneralOperator(const GeneralOperator&)>& map)
{
    const Index m = p.c().dim();
    const Index n = p.a().dim();
    GeneralOperator q = q0 ? *q0 : GeneralOperator::Zero(m, n);
    require_shape(q.rows() == m && q.cols() == n, std::string(name) + ": initial iterate must be dim(C) x dim(A)");

    RiccatiSolution out;
    auto& trace = out.trace;
    double prev_step = 0.0;
    double first_step = 0.0;
    int first_step_iter = 0;
    double last_step = 0.0;
    int last_step_iter = 0;
    double prev_residual = riccati_residual(q, p);
    int stagnant = 0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        GeneralOperator next = map(q);
        const double step = (next - q).norm();
        q = std::move(next);

        TraceRow row;
        row.iter = it;
        row.residual = riccati_residual(q, p);
        row.q_norm = operator_norm(q);
        row.contraction = prev_step > 0.0 ? step / prev_step : 0.0;
        trace.rows.push_back(row);
        if (step > 0.0) {
            if (first_step == 0.0) {
                first_step = step;
                first_step_iter = it;
            }
            last_step = step;
            last_step_iter = it;
        }
        prev_step = step;

        if (row.residual <= opts.residual_tol) {
            trace.converged = true;
            break;
        }
        stagnant = (row.residual > opts.stagnation_ratio * prev_residual) ? stagnant + 1 : 0;
        prev_residual = row.residual;
        if (stagnant >= opts.stagnation_window) {
            std::ostringstream msg;
            msg << name << ": stagnated at residual " << row.residual << " after " << it << " iterations";
            throw ConvergenceError(msg.str());
        }
    }
    trace.final_residual = riccati_residual(q, p);
    if (last_step_iter > first_step_iter) {
        trace.observed_contraction = std::pow(last_step / first_step, 1.0 / (last_step_iter - first_step_iter));
    }
    if (!trace.converged) {
        std::ostringstream msg;
        msg << name << ": no convergence within " << opts.max_iterations << " iterations (residual "
            << trace.final_residual << ")";
        throw ConvergenceError(msg.str());
    }
    out.q = std::move(q);
    return out;
}

}  // namespace

void write_trace_csv(std::ostream& out, const IterationTrace& trace)
{
    out << "iter,residual,q_norm,contraction\n";
    out.precision(17);
    for (const auto& r : trace.rows) {
        out << r.iter << ',' << r.residual << ',' << r.q_norm << ',' << r.contraction << '\n';
    }
}

RiccatiSolution iterate_stieltjes(const RiccatiProblem& p, const std::optional<GeneralOperator>& q0,
                                  const RiccatiOptions& opts)
{
    if (!opts.override_certificate && !existence_report(p).strong_condition) {
        throw PreconditionError("iterate_stieltjes: sqrt(|B| |D|_E) < d/2 does not hold");
    }
    const auto& dc = p.c().decomposition();
    std::vector<double> mu;
    std::vector<ComplexMatrix> pd;
    for (std::size_t k = 0; k < dc.clusters().size(); ++k) {
        mu.push_back(dc.clusters()[k].value);
        pd.push_back(dc.cluster_projector(k) * p.d());
    }
    auto map = [&](const GeneralOperator& q) {
        if (gap_after_coupling(p, q) < opts.gap_floor) {
            throw PreconditionError("iterate_stieltjes: spec(A + BQ) collapsed onto spec C");
        }
        const ComplexMatrix k = p.a().matrix() + p.b() * q;
        GeneralOperator next = GeneralOperator::Zero(q.rows(), q.cols());
        for (std::size_t c = 0; c < mu.size(); ++c) {
            ComplexMatrix shifted = k;
            shifted.diagonal().array() -= mu[c];
            // X (K - mu)^{-1} = ((K - mu)^{-T} X^T)^T
            const Eigen::PartialPivLU<ComplexMatrix> lu(shifted.transpose());
            next += lu.solve(pd[c].transpose()).transpose();
        }
        return next;
    };
    return fixed_point(p, q0, opts, "iterate_stieltjes", map);
}

RiccatiSolution iterate_fourier(const RiccatiProblem& p, const FourierKernel& kernel,
                                const std::optional<GeneralOperator>& q0, const RiccatiOptions& opts)
{
    if (!opts.override_certificate && !existence_report(p).weak_condition) {
        throw PreconditionError("iterate_fourier: sqrt(|B| |D|) < d/pi does not hold");
    }
    if (!kernel.valid()) {
        throw PreconditionError("iterate_fourier: kernel fails the transform check");
    }
    if (p.gap() < kernel.gap() * (1.0 - 1e-12)) {
        throw PreconditionError("iterate_fourier: problem gap is smaller than the kernel gap");
    }
    const auto& da = p.a().decomposition();
    const auto& dc = p.c().decomposition();
    // transfer weights in the joint eigenbasis, fixed across iterations
    ComplexMatrix w(dc.dim(), da.dim());
    for (Index l = 0; l < da.dim(); ++l) {
        for (Index k = 0; k < dc.dim(); ++k) {
            const double x = da.eigenvalues()(l) - dc.eigenvalues()(k);
            if (std::abs(x) > kernel.max_frequency() * (1.0 + 1e-12)) {
                throw PreconditionError("iterate_fourier: spectral spread exceeds the kernel bandwidth");
            }
            w(k, l) = kernel.transfer(x);
        }
    }
    const ComplexMatrix& va = da.eigenvectors();
    const ComplexMatrix& vc = dc.eigenvectors();
    auto map = [&](const GeneralOperator& q) {
        const ComplexMatrix y = vc.adjoint() * (p.d() - q * p.b() * q) * va;
        return GeneralOperator(vc * y.cwiseProduct(w) * va.adjoint());
    };
    RiccatiOptions relaxed = opts;
    // the fixed point of the quadrature map is exact only up to the kernel's transform error
    relaxed.residual_tol = std::max(opts.residual_tol,
                                    kernel.transform_error() * kernel.max_frequency() * (1.0 + p.d().norm()));
    return fixed_point(p, q0, relaxed, "iterate_fourier", map);
}

RiccatiSolution iterate_fourier(const RiccatiProblem& p, const std::optional<GeneralOperator>& q0,
                                const RiccatiOptions& opts)
{
    if (!(p.gap() > 0.0)) {
        throw PreconditionError("iterate_fourier: spectra of A and C are not separated");
    }
    const RealVector& a = p.a().eigenvalues();
    const RealVector& c = p.c().eigenvalues();
    const double spread = std::max(std::abs(a(a.size() - 1) - c(0)), std::abs(c(c.size() - 1) - a(0)));
    return iterate_fourier(p, FourierKernel(p.gap(), spread), q0, opts);
}

}  // namespace opshift
