#pragma once

#include <functional>

#include "opshift/core/hermitian.hpp"

namespace opshift {

/// Minimum distance of z to the spectrum below which a resolvent is refused.
inline constexpr double kResolventFloor = 1e-12;

/// (M - z)^{-1}.
ComplexMatrix resolvent(const HermitianOperator& m, Complex z);

/// Orthogonal spectral projector E_M([lo, hi)).
ComplexMatrix spectral_projector(const SpectralDecomposition& d, const Interval& interval);

/// f(M) = sum_k f(lambda_k) P_k.
ComplexMatrix apply_function(const HermitianOperator& m, const std::function<Complex(double)>& f);

/// min |alpha - gamma| over eigenvalues of the two operators.
double spec_distance(const HermitianOperator& a, const HermitianOperator& c);
double spec_distance(const RealVector& a, const RealVector& c);

/// Distance from a real point to a finite set of reals.
double distance_to_set(double x, const RealVector& points);

}  // namespace opshift
