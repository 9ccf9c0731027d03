#include "opshift/riccati/problem.hpp"

#include <cmath>
#include <numbers>

#include "opshift/core/functions.hpp"
#include "opshift/core/norms.hpp"

namespace opshift {

RiccatiProblem::RiccatiProblem(HermitianOperator a, HermitianOperator c, GeneralOperator b, GeneralOperator d)
    : a_(std::move(a)), c_(std::move(c)), b_(std::move(b)), d_(std::move(d)), gap_(0.0)
{
    require_shape(b_.rows() == a_.dim() && b_.cols() == c_.dim(), "Riccati problem: B must be dim(A) x dim(C)");
    require_shape(d_.rows() == c_.dim() && d_.cols() == a_.dim(), "Riccati problem: D must be dim(C) x dim(A)");
    gap_ = spec_distance(a_, c_);
}

double riccati_residual(const GeneralOperator& q, const RiccatiProblem& p)
{
    require_shape(q.rows() == p.c().dim() && q.cols() == p.a().dim(), "riccati_residual: Q must be dim(C) x dim(A)");
    return (q * p.a().matrix() - p.c().matrix() * q + q * p.b() * q - p.d()).norm();
}

double dual_riccati_check(const GeneralOperator& q, const RiccatiProblem& p)
{
    require_shape(q.rows() == p.c().dim() && q.cols() == p.a().dim(), "dual_riccati_check: Q must be dim(C) x dim(A)");
    const ComplexMatrix k = -q.adjoint();
    return (k * p.c().matrix() - p.a().matrix() * k + k * p.b().adjoint() * k - p.d().adjoint()).norm();
}

double ExistenceCertificate::strong_ball_radius() const
{
    return strong_radius_range ? strong_radius_range->hi : 0.0;
}

ExistenceCertificate existence_report(const RiccatiProblem& p)
{
    constexpr double pi = std::numbers::pi;
    ExistenceCertificate r;
    const double d = p.gap();
    r.gap = d;
    r.b_norm = operator_norm(p.b());
    r.d_norm = operator_norm(p.d());
    r.d_ec_norm = ec_norm(p.d(), p.c().decomposition());
    const double b = r.b_norm;

    r.weak_condition = std::sqrt(b * r.d_norm) < d / pi;
    r.strong_condition = std::sqrt(b * r.d_ec_norm) < d / 2.0;
    r.contraction_sum_weak = b + r.d_norm < 2.0 * d / pi;
    r.contraction_sum_strong = b + r.d_ec_norm < d;
    r.sylvester_reduction = b == 0.0;
    if (!(d > 0.0)) {
        r.weak_condition = r.strong_condition = false;
        r.contraction_sum_weak = r.contraction_sum_strong = false;
        return r;
    }

    if (r.sylvester_reduction) {
        // limits of the bounds as |B| -> 0
        r.predicted_norm_bound = pi * r.d_norm / (2.0 * d);
        r.predicted_ec_bound = r.d_ec_norm / d;
        r.weak_radius_range = RadiusRange{*r.predicted_norm_bound, kInfinity};
        r.strong_radius_range = RadiusRange{*r.predicted_ec_bound, kInfinity};
        return r;
    }

    const double weak_disc = d * d / (pi * pi) - b * r.d_norm;
    if (weak_disc >= 0.0) {
        const double lo = (d / pi - std::sqrt(weak_disc)) / b;
        r.predicted_norm_bound = lo;
        r.weak_radius_range = RadiusRange{lo, d / (pi * b)};
    }
    const double strong_disc = d * d / 4.0 - b * r.d_ec_norm;
    if (strong_disc >= 0.0) {
        const double lo = (d / 2.0 - std::sqrt(strong_disc)) / b;
        r.predicted_ec_bound = lo;
        r.strong_radius_range = RadiusRange{lo, (d - std::sqrt(b * r.d_ec_norm)) / b};
    }
    return r;
}

}  // namespace opshift
