#include "opshift/sylvester/problem.hpp"

#include <numbers>
#include <sstream>

#include "opshift/core/functions.hpp"
#include "opshift/core/norms.hpp"

namespace opshift {

SylvesterProblem::SylvesterProblem(HermitianOperator a, HermitianOperator c, GeneralOperator y)
    : a_(std::move(a)), c_(std::move(c)), y_(std::move(y)), gap_(0.0)
{
    require_shape(y_.rows() == c_.dim() && y_.cols() == a_.dim(),
                  "Sylvester problem: Y must be dim(C) x dim(A)");
    gap_ = spec_distance(a_, c_);
}

void SylvesterProblem::require_gap(const char* method) const
{
    if (!(gap_ > kGapTolerance)) {
        std::ostringstream msg;
        msg << method << ": spectra of A and C are not separated (gap = " << gap_ << ")";
        throw PreconditionError(msg.str());
    }
}

double sylvester_residual(const SylvesterProblem& p, const GeneralOperator& x)
{
    require_shape(x.rows() == p.y().rows() && x.cols() == p.y().cols(), "sylvester_residual: shape of X");
    return (x * p.a().matrix() - p.c().matrix() * x - p.y()).norm();
}

BoundMargins bound_margins(const SylvesterProblem& p, const GeneralOperator& x)
{
    const double d = p.gap();
    BoundMargins m;
    m.operator_norm = std::numbers::pi / (2.0 * d) * operator_norm(p.y()) - operator_norm(x);
    m.hilbert_schmidt = p.y().norm() / d - x.norm();
    const auto& ec = p.c().decomposition();
    m.ec_norm = ec_norm(p.y(), ec) / d - ec_norm(x, ec);
    return m;
}

}  // namespace opshift
