#pragma once

#include <string>
#include <vector>

#include "opshift/graph/block.hpp"
#include "opshift/riccati/iteration.hpp"

namespace opshift {

enum class AngularMethod { automatic, stieltjes, fourier, spectral };

std::string angular_method_name(AngularMethod m);

struct AngularOptions {
    RiccatiOptions riccati{.residual_tol = 1e-12};
    /// Run the requested method even when its hypothesis fails.
    bool override_hypothesis = false;
};

/// Hypothesis a method is certified under.
Hypothesis hypothesis_for(AngularMethod m);

/// Method chosen by `automatic`: HEnorm, then HBpi, then HAdL. Throws
/// PreconditionError when none holds.
AngularMethod select_method(const HypothesisReport& r);

/// Angular operator Q10 of the reducing graph subspace G(H0, Q10).
/// stieltjes: Riccati fixed point over A1 (or the dual problem over A0 when
///            its E-norm is smaller, with Q10 = -Q01^*);
/// fourier:   Fourier-kernel fixed point;
/// spectral:  Q10 = W1 W0^{-1} read off the spectral subspace of the lower block.
AngularOperator solve_angular(const BlockOperatorMatrix& b, AngularMethod method = AngularMethod::automatic,
                              const AngularOptions& opts = {});

struct DiagonalizationResult {
    ComplexMatrix v;            // I + Q
    ComplexMatrix k0;           // A0 + B01 Q10
    ComplexMatrix k1;           // A1 + B10 Q01
    ComplexVector k0_spectrum;
    ComplexVector k1_spectrum;
    double offdiag_residual = 0.0;   // off-diagonal blocks of the transformed H
    double block_deviation = 0.0;    // diagonal blocks against K_i (similarity) or the polar formula (unitary)

    // unitary path only
    ComplexMatrix u;
    ComplexMatrix h0;
    ComplexMatrix h1;
    double unitarity_defect = 0.0;   // |U^*U - I|
    double hermitian_defect = 0.0;   // max over blocks before symmetrization
    double vv_structure_defect = 0.0;  // |VV^* - diag(I + Q01 Q01^*, I + Q10 Q10^*)|
};

/// Residual ceiling accepted by the diagonalizations.
inline constexpr double kDiagonalizationResidual = 1e-8;

/// V^{-1} H V = diag(A0 + B01 Q10, A1 + B10 Q01).
DiagonalizationResult similarity_diagonalize(const BlockOperatorMatrix& b, const AngularOperator& q);

/// U^* H U = diag(H0, H1) with V = U|V|, |V| = (VV^*)^{1/2} taken blockwise.
DiagonalizationResult unitary_diagonalize(const BlockOperatorMatrix& b, const AngularOperator& q);

struct AdlProjections {
    ComplexMatrix lower;   // E_H((-inf, a0])
    ComplexMatrix upper;   // E_H([a1, +inf))
    int lower_block = 0;
    double a0 = 0.0;
    double a1 = 0.0;
    double idempotency_defect = 0.0;
    double hermitian_defect = 0.0;
    double completeness_defect = 0.0;  // |lower + upper - I|
    double graph_defect = 0.0;         // block formulas against W (W^*W)^{-1} W^*
    double complement_defect = 0.0;    // G(H0, Q10)^perp against G(H1, -Q10^*)
    double spectral_defect = 0.0;      // lower against the eigenprojector of H below the gap
};

AdlProjections adl_projections(const BlockOperatorMatrix& b, const AngularOperator& q);

/// Orthogonal projector onto G(H1, Q01) = {(Q01 y, y)}.
ComplexMatrix graph_projector_upper(const GeneralOperator& q01);

/// Lower-block projector from the closed form in terms of Q = Q01:
/// [[(I+QQ^*)^{-1}, -(I+QQ^*)^{-1}Q], [-Q^*(I+QQ^*)^{-1}, Q^*(I+QQ^*)^{-1}Q]].
ComplexMatrix adl_lower_formula(const GeneralOperator& q01);
/// [[Q(I+Q^*Q)^{-1}Q^*, Q(I+Q^*Q)^{-1}], [(I+Q^*Q)^{-1}Q^*, (I+Q^*Q)^{-1}]].
ComplexMatrix adl_upper_formula(const GeneralOperator& q01);

/// How far inside its admissible region the spectrum of each K_i lies.
/// HEnorm: d/2 - max dist(spec K_i, spec A_i); HBpi: the same with d/pi;
/// HAdL: a0 - max spec K_lower and min spec K_upper - a1.
/// Negative when the spectrum leaves the region.
double vanishing_margin(const BlockOperatorMatrix& b, const AngularOperator& q, Hypothesis h);

struct HomotopySample {
    double t = 0.0;
    double q_norm = 0.0;
    double residual = 0.0;
    double vanishing_margin = 0.0;
};

struct HomotopyReport {
    AngularMethod method = AngularMethod::automatic;
    Hypothesis hypothesis = Hypothesis::henorm;
    std::vector<HomotopySample> samples;
    double max_step = 0.0;          // max_k |Q(t_{k+1}) - Q(t_k)|
    double refined_max_step = 0.0;  // same on the grid with 2N - 1 points
    double refinement_ratio = 0.0;  // max_step / refined_max_step
    double min_vanishing_margin = 0.0;
};

/// Angular operators of A + tB on a uniform grid of t_count points in [0, 1].
/// The method is fixed by the hypotheses at t = 1, which are monotone in t.
HomotopyReport homotopy_scan(const BlockOperatorMatrix& b, int t_count, const AngularOptions& opts = {});

/// (pi / 2d) |B10 - Q10 B01 Q10|_p - |Q10|_p; p = kInfinity is the operator norm.
double schatten_inheritance_check(const BlockOperatorMatrix& b, const AngularOperator& q, double p);

}  // namespace opshift
