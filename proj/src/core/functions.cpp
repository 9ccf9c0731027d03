#include "opshift/core/functions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace opshift {

ComplexMatrix resolvent(const HermitianOperator& m, Complex z)
{
    const SpectralDecomposition& d = m.decomposition();
    ComplexVector diag(d.dim());
    for (Index k = 0; k < d.dim(); ++k) {
        const Complex gap = d.eigenvalues()(k) - z;
        if (std::abs(gap) <= kResolventFloor) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "resolvent requested at z = " << z << ", within " << kResolventFloor
                << " of eigenvalue " << d.eigenvalues()(k);
            throw SingularityError(msg.str());
        }
        diag(k) = 1.0 / gap;
    }
    return d.eigenvectors() * diag.asDiagonal() * d.eigenvectors().adjoint();
}

ComplexMatrix spectral_projector(const SpectralDecomposition& d, const Interval& interval)
{
    return d.projector(interval);
}

ComplexMatrix apply_function(const HermitianOperator& m, const std::function<Complex(double)>& f)
{
    const SpectralDecomposition& d = m.decomposition();
    ComplexVector diag(d.dim());
    for (Index k = 0; k < d.dim(); ++k) {
        const Complex v = f(d.eigenvalues()(k));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream msg;
            msg << "function is not finite at eigenvalue " << d.eigenvalues()(k);
            throw PreconditionError(msg.str());
        }
        diag(k) = v;
    }
    return d.eigenvectors() * diag.asDiagonal() * d.eigenvectors().adjoint();
}

double spec_distance(const RealVector& a, const RealVector& c)
{
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < a.size(); ++i) {
        for (Index j = 0; j < c.size(); ++j) {
            best = std::min(best, std::abs(a(i) - c(j)));
        }
    }
    return best;
}

double spec_distance(const HermitianOperator& a, const HermitianOperator& c)
{
    return spec_distance(a.eigenvalues(), c.eigenvalues());
}

double distance_to_set(double x, const RealVector& points)
{
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < points.size(); ++i) {
        best = std::min(best, std::abs(x - points(i)));
    }
    return best;
}

}  // namespace opshift
