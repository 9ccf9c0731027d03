#include "opshift/core/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opshift {

namespace {

std::vector<EigenCluster> build_clusters(const RealVector& values, double tol)
{
    std::vector<EigenCluster> clusters;
    const Index n = values.size();
    Index start = 0;
    for (Index k = 1; k <= n; ++k) {
        if (k == n || values(k) - values(k - 1) > tol) {
            EigenCluster c;
            c.begin = start;
            c.end = k;
            c.value = values.segment(start, k - start).mean();
            clusters.push_back(c);
            start = k;
        }
    }
    return clusters;
}

std::shared_ptr<const SpectralDecomposition> decompose(const ComplexMatrix& m, double relative_degeneracy)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("Hermitian eigensolver did not converge");
    }
    const RealVector& values = solver.eigenvalues();
    const double radius = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
    return std::make_shared<const SpectralDecomposition>(values, solver.eigenvectors(),
                                                         relative_degeneracy * (1.0 + radius));
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(RealVector eigenvalues, ComplexMatrix eigenvectors,
                                             double degeneracy_tolerance)
    : eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)),
      degeneracy_tolerance_(degeneracy_tolerance),
      clusters_(build_clusters(eigenvalues_, degeneracy_tolerance))
{
    require_shape(eigenvectors_.rows() == eigenvalues_.size() && eigenvectors_.cols() == eigenvalues_.size(),
                  "eigenvector matrix must be square with one column per eigenvalue");
}

double SpectralDecomposition::spectral_radius() const
{
    return dim() ? eigenvalues_.cwiseAbs().maxCoeff() : 0.0;
}

ComplexMatrix SpectralDecomposition::cluster_projector(std::size_t cluster) const
{
    const EigenCluster& c = clusters_.at(cluster);
    const auto block = eigenvectors_.middleCols(c.begin, c.size());
    return block * block.adjoint();
}

ComplexMatrix SpectralDecomposition::projector(const Interval& interval) const
{
    ComplexMatrix p = ComplexMatrix::Zero(dim(), dim());
    for (Index k = 0; k < dim(); ++k) {
        if (interval.contains(eigenvalues_(k))) {
            p.noalias() += eigenvectors_.col(k) * eigenvectors_.col(k).adjoint();
        }
    }
    return p;
}

ComplexMatrix SpectralDecomposition::reconstruct() const
{
    return eigenvectors_ * eigenvalues_.cast<Complex>().asDiagonal() * eigenvectors_.adjoint();
}

double hermitian_defect(const ComplexMatrix& m)
{
    if (m.size() == 0) {
        return 0.0;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix block_diagonal(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

HermitianOperator::HermitianOperator(const ComplexMatrix& entries, double relative_degeneracy)
{
    require_shape(entries.rows() == entries.cols() && entries.rows() > 0,
                  "Hermitian operator must be a non-empty square matrix");
    const double defect = hermitian_defect(entries);
    if (defect > kHermitianTolerance) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian: max |M - M^*| = " << defect;
        throw PreconditionError(msg.str());
    }
    entries_ = 0.5 * (entries + entries.adjoint());
    decomposition_ = decompose(entries_, relative_degeneracy);
}

HermitianOperator::HermitianOperator(const RealMatrix& entries, double relative_degeneracy)
    : HermitianOperator(ComplexMatrix(entries.cast<Complex>()), relative_degeneracy)
{
}

HermitianOperator::HermitianOperator(Unchecked, ComplexMatrix entries, double relative_degeneracy)
    : entries_(std::move(entries)), decomposition_(decompose(entries_, relative_degeneracy))
{
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m, double relative_degeneracy)
{
    require_shape(m.rows() == m.cols() && m.rows() > 0, "symmetrized: matrix must be square");
    return HermitianOperator(Unchecked{}, 0.5 * (m + m.adjoint()), relative_degeneracy);
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values)
{
    RealVector v(static_cast<Index>(values.size()));
    std::copy(values.begin(), values.end(), v.data());
    return HermitianOperator(RealMatrix(v.asDiagonal()));
}

HermitianOperator HermitianOperator::diagonal(std::initializer_list<double> values)
{
    return diagonal(std::span<const double>(values.begin(), values.size()));
}

HermitianOperator HermitianOperator::from_spectrum(const RealVector& values, const ComplexMatrix& unitary)
{
    require_shape(unitary.rows() == values.size() && unitary.cols() == values.size(),
                  "from_spectrum: unitary must match the spectrum size");
    return symmetrized(unitary * values.cast<Complex>().asDiagonal() * unitary.adjoint());
}

}  // namespace opshift
