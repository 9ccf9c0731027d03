#pragma once

#include <optional>
#include <string>

#include "opshift/core/hermitian.hpp"

namespace opshift {

/// H = [[A0, B01], [B10, A1]] on H0 (+) H1 with B10 = B01^*.
class BlockOperatorMatrix {
public:
    BlockOperatorMatrix(HermitianOperator a0, HermitianOperator a1, GeneralOperator b01);

    const HermitianOperator& a0() const { return a0_; }
    const HermitianOperator& a1() const { return a1_; }
    const GeneralOperator& b01() const { return b01_; }
    GeneralOperator b10() const { return b01_.adjoint(); }
    Index n0() const { return a0_.dim(); }
    Index n1() const { return a1_.dim(); }

    /// The assembled operator H.
    const HermitianOperator& h() const { return h_; }
    /// The unperturbed diagonal part diag(A0, A1).
    const HermitianOperator& diagonal_part() const { return a_; }

    /// A + tB.
    BlockOperatorMatrix scaled(double t) const;

private:
    HermitianOperator a0_;
    HermitianOperator a1_;
    GeneralOperator b01_;
    HermitianOperator h_;
    HermitianOperator a_;
};

/// Skew block Q = [[0, Q01], [Q10, 0]] with Q01 = -Q10^*.
class AngularOperator {
public:
    explicit AngularOperator(GeneralOperator q10, std::string route = "given");

    const GeneralOperator& q10() const { return q10_; }
    GeneralOperator q01() const { return -q10_.adjoint(); }
    ComplexMatrix assembled() const;
    /// How Q10 was obtained (solver route), recorded for reports.
    const std::string& route() const { return route_; }

private:
    GeneralOperator q10_;
    std::string route_;
};

enum class Hypothesis { henorm, hbpi, hadl };

std::string hypothesis_name(Hypothesis h);

struct HypothesisReport {
    double d = 0.0;            // dist(spec A0, spec A1)
    double b_norm = 0.0;       // |B01|
    double ec_norm_a0 = 0.0;   // |B01|_{E_{A0}}
    double ec_norm_a1 = 0.0;   // |B10|_{E_{A1}}
    bool henorm_holds = false; // |B01| min(ec norms) < d^2 / 4
    bool hbpi_holds = false;   // |B01| < d / pi
    bool hadl_holds = false;   // one diagonal block lies entirely below the other
    /// Under HAdL: the channel whose spectrum is lower, and the gap (a0, a1)
    /// between the top of that block and the bottom of the other.
    int lower_block = 0;
    std::optional<std::pair<double, double>> hadl_gap;

    bool holds(Hypothesis h) const;
};

HypothesisReport hypothesis_report(const BlockOperatorMatrix& b);

/// |Q10 A0 - A1 Q10 + Q10 B01 Q10 - B10|_F
double block_riccati_residual(const BlockOperatorMatrix& b, const AngularOperator& q);

/// Orthogonal projector W (W^* W)^{-1} W^* onto the graph of Q10 over H0,
/// W = [I; Q10].
ComplexMatrix graph_projector(const GeneralOperator& q10);

/// |(I - P) H P| with P the graph projector of Q10: zero iff the graph is invariant.
double invariance_defect(const BlockOperatorMatrix& b, const AngularOperator& q);

}  // namespace opshift
