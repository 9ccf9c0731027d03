#include "opshift/core/random.hpp"

#include <cmath>

namespace opshift {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

ComplexMatrix gaussian_matrix(Rng& rng, Index rows, Index cols)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(rows, cols);
    // fill in a fixed order so the result is independent of Eigen's traversal
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    return g;
}

ComplexMatrix haar_unitary(Rng& rng, Index n)
{
    const ComplexMatrix g = gaussian_matrix(rng, n, n);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < n; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) {
            q.col(k) *= r(k, k) / mag;
        }
    }
    return q;
}

HermitianOperator random_hermitian_with_spectrum(Rng& rng, const RealVector& spectrum)
{
    return HermitianOperator::from_spectrum(spectrum, haar_unitary(rng, spectrum.size()));
}

HermitianOperator random_hermitian(Rng& rng, Index n, double scale)
{
    const ComplexMatrix g = gaussian_matrix(rng, n, n);
    return HermitianOperator::symmetrized(scale * 0.5 * (g + g.adjoint()));
}

double uniform(Rng& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    return u(rng);
}

}  // namespace opshift
