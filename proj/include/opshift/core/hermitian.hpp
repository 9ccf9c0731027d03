#pragma once

#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "opshift/core/types.hpp"

namespace opshift {

/// Half-open real interval [lo, hi). Infinite endpoints are allowed.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return lo <= x && x < hi; }
};

/// Maximal run of consecutive (ascending) eigenvalue indices [begin, end)
/// whose neighbours differ by at most the degeneracy tolerance.
struct EigenCluster {
    Index begin = 0;
    Index end = 0;
    double value = 0.0;  // mean of the member eigenvalues

    Index size() const { return end - begin; }
};

/// Ascending eigenvalues with orthonormal eigenvectors of a Hermitian matrix.
class SpectralDecomposition {
public:
    SpectralDecomposition(RealVector eigenvalues, ComplexMatrix eigenvectors,
                          double degeneracy_tolerance);

    Index dim() const { return eigenvalues_.size(); }
    const RealVector& eigenvalues() const { return eigenvalues_; }
    const ComplexMatrix& eigenvectors() const { return eigenvectors_; }
    const std::vector<EigenCluster>& clusters() const { return clusters_; }
    double degeneracy_tolerance() const { return degeneracy_tolerance_; }
    double spectral_radius() const;

    /// Orthogonal projector onto the eigenspace of one cluster.
    ComplexMatrix cluster_projector(std::size_t cluster) const;

    /// E([lo, hi)): sum of rank-one projectors of eigenvalues in the interval.
    ComplexMatrix projector(const Interval& interval) const;

    /// Sum over k of lambda_k P_k.
    ComplexMatrix reconstruct() const;

private:
    RealVector eigenvalues_;
    ComplexMatrix eigenvectors_;
    double degeneracy_tolerance_;
    std::vector<EigenCluster> clusters_;
};

/// Relative degeneracy tolerance: clusters merge eigenvalues closer than
/// kDefaultDegeneracy * (1 + spectral radius).
inline constexpr double kDefaultDegeneracy = 1e-9;

/// Absolute tolerance of the Hermitian check at construction.
inline constexpr double kHermitianTolerance = 1e-12;

/// Dense self-adjoint matrix. The spectral decomposition is computed once at
/// construction and shared between copies, so instances are immutable and
/// safe to read concurrently.
class HermitianOperator {
public:
    explicit HermitianOperator(const ComplexMatrix& entries,
                               double relative_degeneracy = kDefaultDegeneracy);
    explicit HermitianOperator(const RealMatrix& entries,
                               double relative_degeneracy = kDefaultDegeneracy);

    /// Takes the Hermitian part (M + M^*)/2 without checking how far M was from it.
    static HermitianOperator symmetrized(const ComplexMatrix& m,
                                         double relative_degeneracy = kDefaultDegeneracy);
    static HermitianOperator diagonal(std::span<const double> values);
    static HermitianOperator diagonal(std::initializer_list<double> values);
    /// U diag(values) U^* for a unitary U.
    static HermitianOperator from_spectrum(const RealVector& values, const ComplexMatrix& unitary);

    Index dim() const { return entries_.rows(); }
    const ComplexMatrix& matrix() const { return entries_; }
    const SpectralDecomposition& decomposition() const { return *decomposition_; }
    const RealVector& eigenvalues() const { return decomposition_->eigenvalues(); }
    double min_eigenvalue() const { return eigenvalues()(0); }
    double max_eigenvalue() const { return eigenvalues()(dim() - 1); }

private:
    struct Unchecked {};
    HermitianOperator(Unchecked, ComplexMatrix entries, double relative_degeneracy);

    ComplexMatrix entries_;
    std::shared_ptr<const SpectralDecomposition> decomposition_;
};

/// Largest entrywise deviation |M - M^*|.
double hermitian_defect(const ComplexMatrix& m);

/// Block diagonal assembly diag(a, b).
ComplexMatrix block_diagonal(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace opshift
