#pragma once

#include <limits>
#include <optional>

#include "opshift/core/hermitian.hpp"

namespace opshift {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Singular values in descending order.
RealVector singular_values(const ComplexMatrix& y);

/// Largest singular value.
double operator_norm(const ComplexMatrix& y);
double hilbert_schmidt_norm(const ComplexMatrix& y);
double trace_norm(const ComplexMatrix& y);

/// Schatten p-norm, p in [1, inf]; p = kInfinity gives the operator norm.
double schatten_norm(const ComplexMatrix& y, double p);

/// Norm of Y with respect to the spectral measure of the operator whose
/// decomposition is given: sup over partitions {delta_k} of
/// sqrt(sum_k |E(delta_k) Y|^2). Since |(P1 + P2) Y|^2 <= |P1 Y|^2 + |P2 Y|^2
/// for orthogonal P1, P2, refining a partition never decreases the sum, so
/// the supremum is attained by the partition into single eigenvalue clusters.
/// Y must map into the decomposed space (rows == dim).
double ec_norm(const ComplexMatrix& y, const SpectralDecomposition& reference);

struct NormReport {
    double operator_norm = 0.0;
    double hilbert_schmidt = 0.0;
    double trace_norm = 0.0;
    std::optional<double> ec_norm;
};

NormReport norm_report(const ComplexMatrix& y, const SpectralDecomposition* reference = nullptr);

}  // namespace opshift
