#pragma once

#include <cstdint>
#include <random>

#include "opshift/core/hermitian.hpp"

namespace opshift {

using Rng = std::mt19937_64;

/// Seed for an independent stream derived from (seed, stream) by splitmix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Matrix with i.i.d. standard complex Gaussian entries.
ComplexMatrix gaussian_matrix(Rng& rng, Index rows, Index cols);

/// Haar-distributed unitary: QR of a complex Gaussian with the phases of R's
/// diagonal moved into Q.
ComplexMatrix haar_unitary(Rng& rng, Index n);

/// U diag(spectrum) U^* with Haar U.
HermitianOperator random_hermitian_with_spectrum(Rng& rng, const RealVector& spectrum);

/// GUE-like Hermitian matrix (G + G^*)/2 scaled by `scale`.
HermitianOperator random_hermitian(Rng& rng, Index n, double scale = 1.0);

/// Uniform draw in [lo, hi).
double uniform(Rng& rng, double lo, double hi);

}  // namespace opshift
