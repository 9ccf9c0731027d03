#include "opshift/graph/block.hpp"

#include <numbers>

#include "opshift/core/functions.hpp"
#include "opshift/core/norms.hpp"

namespace opshift {

namespace {

ComplexMatrix assemble(const ComplexMatrix& a0, const ComplexMatrix& a1, const ComplexMatrix& b01)
{
    const Index n0 = a0.rows();
    const Index n1 = a1.rows();
    ComplexMatrix h(n0 + n1, n0 + n1);
    h.topLeftCorner(n0, n0) = a0;
    h.bottomRightCorner(n1, n1) = a1;
    h.topRightCorner(n0, n1) = b01;
    h.bottomLeftCorner(n1, n0) = b01.adjoint();
    return h;
}

}  // namespace

BlockOperatorMatrix::BlockOperatorMatrix(HermitianOperator a0, HermitianOperator a1, GeneralOperator b01)
    : a0_(std::move(a0)),
      a1_(std::move(a1)),
      b01_(std::move(b01)),
      h_(HermitianOperator::symmetrized(ComplexMatrix::Zero(1, 1))),
      a_(HermitianOperator::symmetrized(ComplexMatrix::Zero(1, 1)))
{
    require_shape(b01_.rows() == a0_.dim() && b01_.cols() == a1_.dim(),
                  "BlockOperatorMatrix: B01 must be dim(A0) x dim(A1)");
    h_ = HermitianOperator(assemble(a0_.matrix(), a1_.matrix(), b01_));
    a_ = HermitianOperator(block_diagonal(a0_.matrix(), a1_.matrix()));
}

BlockOperatorMatrix BlockOperatorMatrix::scaled(double t) const
{
    return {a0_, a1_, t * b01_};
}

AngularOperator::AngularOperator(GeneralOperator q10, std::string route)
    : q10_(std::move(q10)), route_(std::move(route))
{
}

ComplexMatrix AngularOperator::assembled() const
{
    const Index n1 = q10_.rows();
    const Index n0 = q10_.cols();
    ComplexMatrix q = ComplexMatrix::Zero(n0 + n1, n0 + n1);
    q.topRightCorner(n0, n1) = q01();
    q.bottomLeftCorner(n1, n0) = q10_;
    return q;
}

std::string hypothesis_name(Hypothesis h)
{
    switch (h) {
    case Hypothesis::henorm: return "HEnorm";
    case Hypothesis::hbpi: return "HBpi";
    case Hypothesis::hadl: return "HAdL";
    }
    return "unknown";
}

bool HypothesisReport::holds(Hypothesis h) const
{
    switch (h) {
    case Hypothesis::henorm: return henorm_holds;
    case Hypothesis::hbpi: return hbpi_holds;
    case Hypothesis::hadl: return hadl_holds;
    }
    return false;
}

HypothesisReport hypothesis_report(const BlockOperatorMatrix& b)
{
    HypothesisReport r;
    r.d = spec_distance(b.a0(), b.a1());
    r.b_norm = operator_norm(b.b01());
    r.ec_norm_a0 = ec_norm(b.b01(), b.a0().decomposition());
    r.ec_norm_a1 = ec_norm(b.b10(), b.a1().decomposition());
    if (r.d > 0.0) {
        r.henorm_holds = r.b_norm * std::min(r.ec_norm_a0, r.ec_norm_a1) < r.d * r.d / 4.0;
        r.hbpi_holds = r.b_norm < r.d / std::numbers::pi;
    }
    if (b.a0().max_eigenvalue() < b.a1().min_eigenvalue()) {
        r.hadl_holds = true;
        r.lower_block = 0;
        r.hadl_gap = std::make_pair(b.a0().max_eigenvalue(), b.a1().min_eigenvalue());
    } else if (b.a1().max_eigenvalue() < b.a0().min_eigenvalue()) {
        r.hadl_holds = true;
        r.lower_block = 1;
        r.hadl_gap = std::make_pair(b.a1().max_eigenvalue(), b.a0().min_eigenvalue());
    }
    return r;
}

double block_riccati_residual(const BlockOperatorMatrix& b, const AngularOperator& q)
{
    const GeneralOperator& q10 = q.q10();
    require_shape(q10.rows() == b.n1() && q10.cols() == b.n0(), "block_riccati_residual: Q10 must be n1 x n0");
    return (q10 * b.a0().matrix() - b.a1().matrix() * q10 + q10 * b.b01() * q10 - b.b10()).norm();
}

ComplexMatrix graph_projector(const GeneralOperator& q10)
{
    const Index n1 = q10.rows();
    const Index n0 = q10.cols();
    ComplexMatrix w(n0 + n1, n0);
    w.topRows(n0).setIdentity();
    w.bottomRows(n1) = q10;
    const ComplexMatrix gram = w.adjoint() * w;
    return w * gram.llt().solve(w.adjoint());
}

double invariance_defect(const BlockOperatorMatrix& b, const AngularOperator& q)
{
    const ComplexMatrix p = graph_projector(q.q10());
    const Index n = p.rows();
    return operator_norm((ComplexMatrix::Identity(n, n) - p) * b.h().matrix() * p);
}

}  // namespace opshift
