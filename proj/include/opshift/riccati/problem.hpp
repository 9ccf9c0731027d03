#pragma once

#include <optional>

#include "opshift/core/hermitian.hpp"

namespace opshift {

/// QA - CQ + QBQ = D with A (n x n), C (m x m), B (n x m), D (m x n); Q is m x n.
class RiccatiProblem {
public:
    RiccatiProblem(HermitianOperator a, HermitianOperator c, GeneralOperator b, GeneralOperator d);

    const HermitianOperator& a() const { return a_; }
    const HermitianOperator& c() const { return c_; }
    const GeneralOperator& b() const { return b_; }
    const GeneralOperator& d() const { return d_; }
    /// dist(spec A, spec C)
    double gap() const { return gap_; }

private:
    HermitianOperator a_;
    HermitianOperator c_;
    GeneralOperator b_;
    GeneralOperator d_;
    double gap_;
};

/// |QA - CQ + QBQ - D|_F
double riccati_residual(const GeneralOperator& q, const RiccatiProblem& p);

/// |KC - AK + KB^*K - D^*|_F at K = -Q^*. Equal to riccati_residual(q, p):
/// the dual residual is minus the adjoint of the primal one.
double dual_riccati_check(const GeneralOperator& q, const RiccatiProblem& p);

struct RadiusRange {
    double lo = 0.0;
    double hi = 0.0;  // open upper end; +inf when B = 0
};

/// Existence conditions, a-priori bounds and admissible fixed-point ball radii
/// computed from |B|, |D|, |D|_{E_C} and the gap d.
struct ExistenceCertificate {
    double gap = 0.0;
    double b_norm = 0.0;
    double d_norm = 0.0;
    double d_ec_norm = 0.0;

    bool weak_condition = false;          // sqrt(|B||D|) < d / pi
    bool strong_condition = false;        // sqrt(|B||D|_E) < d / 2
    bool contraction_sum_weak = false;    // |B| + |D| < 2d / pi
    bool contraction_sum_strong = false;  // |B| + |D|_E < d

    /// |Q| <= (1/|B|)(d/pi - sqrt(d^2/pi^2 - |B||D|)); pi|D|/(2d) when B = 0.
    std::optional<double> predicted_norm_bound;
    /// |Q|_E <= (1/|B|)(d/2 - sqrt(d^2/4 - |B||D|_E)); |D|_E/d when B = 0.
    std::optional<double> predicted_ec_bound;
    /// Radii r for which the Fourier map contracts the ball |Q| <= r into itself.
    std::optional<RadiusRange> weak_radius_range;
    /// Radii r for which the Stieltjes map contracts the ball into itself.
    std::optional<RadiusRange> strong_radius_range;

    /// B = 0: the equation is the Sylvester equation QA - CQ = D.
    bool sylvester_reduction = false;

    /// Upper end of strong_radius_range: (d - sqrt(|B||D|_E)) / |B|.
    double strong_ball_radius() const;
};

ExistenceCertificate existence_report(const RiccatiProblem& p);

}  // namespace opshift
