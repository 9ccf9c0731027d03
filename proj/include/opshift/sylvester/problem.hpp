#pragma once

#include "opshift/core/hermitian.hpp"

namespace opshift {

/// Gaps at or below this value are treated as touching spectra.
inline constexpr double kGapTolerance = 1e-12;

/// XA - CX = Y with A (n x n), C (m x m) Hermitian and Y of size m x n.
class SylvesterProblem {
public:
    SylvesterProblem(HermitianOperator a, HermitianOperator c, GeneralOperator y);

    const HermitianOperator& a() const { return a_; }
    const HermitianOperator& c() const { return c_; }
    const GeneralOperator& y() const { return y_; }
    /// dist(spec A, spec C)
    double gap() const { return gap_; }

    /// Throws PreconditionError unless gap() > kGapTolerance.
    void require_gap(const char* method) const;

private:
    HermitianOperator a_;
    HermitianOperator c_;
    GeneralOperator y_;
    double gap_;
};

/// |XA - CX - Y|_F
double sylvester_residual(const SylvesterProblem& p, const GeneralOperator& x);

/// Slack in the a-priori bounds; negative means a bound is violated.
struct BoundMargins {
    double operator_norm = 0.0;    // (pi / 2d) |Y| - |X|
    double hilbert_schmidt = 0.0;  // |Y|_2 / d - |X|_2
    double ec_norm = 0.0;          // |Y|_{E_C} / d - |X|_{E_C}
};

BoundMargins bound_margins(const SylvesterProblem& p, const GeneralOperator& x);

}  // namespace opshift
