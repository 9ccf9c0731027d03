#include "opshift/core/norms.hpp"

#include <cmath>

namespace opshift {

RealVector singular_values(const ComplexMatrix& y)
{
    if (y.size() == 0) {
        return RealVector();
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(y);
    return svd.singularValues();
}

double operator_norm(const ComplexMatrix& y)
{
    const RealVector s = singular_values(y);
    return s.size() ? s(0) : 0.0;
}

double hilbert_schmidt_norm(const ComplexMatrix& y)
{
    return y.norm();
}

double trace_norm(const ComplexMatrix& y)
{
    return singular_values(y).sum();
}

double schatten_norm(const ComplexMatrix& y, double p)
{
    if (!(p >= 1.0)) {
        throw PreconditionError("Schatten norm requires p >= 1");
    }
    const RealVector s = singular_values(y);
    if (s.size() == 0 || s(0) == 0.0) {
        return 0.0;
    }
    if (std::isinf(p)) {
        return s(0);
    }
    // scale by the largest singular value to keep s^p in range
    const double top = s(0);
    double sum = 0.0;
    for (Index k = 0; k < s.size(); ++k) {
        sum += std::pow(s(k) / top, p);
    }
    return top * std::pow(sum, 1.0 / p);
}

double ec_norm(const ComplexMatrix& y, const SpectralDecomposition& reference)
{
    require_shape(y.rows() == reference.dim(),
                  "ec_norm: operator must map into the space of the reference decomposition");
    const ComplexMatrix& v = reference.eigenvectors();
    double sum = 0.0;
    for (const EigenCluster& c : reference.clusters()) {
        // |P_c Y| = |V_c^* Y| because V_c has orthonormal columns
        const ComplexMatrix block = v.middleCols(c.begin, c.size()).adjoint() * y;
        const double n = operator_norm(block);
        sum += n * n;
    }
    return std::sqrt(sum);
}

NormReport norm_report(const ComplexMatrix& y, const SpectralDecomposition* reference)
{
    NormReport r;
    const RealVector s = singular_values(y);
    r.operator_norm = s.size() ? s(0) : 0.0;
    r.hilbert_schmidt = y.norm();
    r.trace_norm = s.sum();
    if (reference != nullptr) {
        r.ec_norm = ec_norm(y, *reference);
    }
    return r;
}

}  // namespace opshift
