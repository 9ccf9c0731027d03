#pragma once

#include <functional>
#include <string>
#include <vector>

#include "opshift/graph/decomposition.hpp"
#include "opshift/ssf/step_function.hpp"

namespace opshift {

/// xi(lambda) = #{alpha_j <= lambda} - #{eta_j <= lambda} for eigenvalues eta of H, alpha of A.
StepFunction counting_ssf(const HermitianOperator& h, const HermitianOperator& a);
StepFunction counting_ssf(const RealVector& h_eigenvalues, const RealVector& a_eigenvalues);

/// Smooth test function with its derivative and the interval outside which it vanishes.
struct TestFunction {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> df;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

/// C-infinity bump exp(-1 / (1 - x^2)) with x = (lambda - center) / half_width.
TestFunction smooth_bump(double center, double half_width, double height = 1.0);
/// lambda * chi(lambda), chi = 1 on [lo, hi], 0 outside [lo - margin, hi + margin].
TestFunction plateau_identity(double lo, double hi, double margin);

struct TraceCheck {
    std::string name;
    double lhs = 0.0;         // tr(phi(H) - phi(A))
    double exact_sum = 0.0;   // int phi' xi as a finite sum over breakpoints
    double quadrature = 0.0;  // int phi' xi by adaptive quadrature per piece
    double residual = 0.0;    // max deviation of the two right-hand sides from lhs
    bool covers_spectra = true;
};

struct TraceFormulaReport {
    std::vector<TraceCheck> checks;
    double max_residual = 0.0;
    bool all_cover = true;
};

TraceFormulaReport trace_formula_check(const HermitianOperator& h, const HermitianOperator& a,
                                       const std::vector<TestFunction>& phis);

/// prod_j (eta_j - z) / (alpha_j - z), factors paired in ascending order.
Complex perturbation_determinant(const HermitianOperator& h, const HermitianOperator& a, Complex z);
Complex perturbation_determinant(const ComplexVector& eta, const ComplexVector& alpha, Complex z);
/// det(H - z) / det(A - z) from LU factorizations.
Complex perturbation_determinant_dense(const ComplexMatrix& h, const ComplexMatrix& a, Complex z);

struct DeterminantTrace {
    std::vector<Complex> z;
    std::vector<Complex> values;
    std::vector<double> argument;  // continuous branch, 0 at the anchor
};

struct ArgumentOptions {
    std::vector<double> eps_schedule;  // empty: geometric from 1 to 1e-8, 8 points per decade
    double regularity_floor = 0.05;
    int max_refinements = 40;
};

std::vector<double> default_eps_schedule();

/// (1/pi) arg D_{H/A}(lambda + i eps) at the end of the schedule. The branch
/// is anchored at a height where |D - 1| < 1/2 and continued down the path,
/// inserting midpoints whenever a step turns the argument by more than pi/2.
double ssf_via_argument(const HermitianOperator& h, const HermitianOperator& a, double lambda,
                        const ArgumentOptions& opts = {}, DeterminantTrace* trace = nullptr);

struct SplittingReport {
    StepFunction full;  // xi(.; H, A0 (+) A1)
    StepFunction xi0;   // xi(.; H0, A0)
    StepFunction xi1;   // xi(.; H1, A1)
    int max_difference = 0;
    bool exact = false;
    bool modulo_integers = false;
    double riccati_residual = 0.0;
};

SplittingReport splitting_check(const BlockOperatorMatrix& b, const AngularOperator& q);

struct Violation {
    double lambda = 0.0;
    int channel = 0;
    int value = 0;
};

/// Points of the grid where xi_i is nonzero although it must vanish there:
/// HEnorm: dist(lambda, spec A_i) > d/2; HBpi: > d/pi;
/// HAdL: xi_lower on [a1, inf) and xi_upper on (-inf, a0].
std::vector<Violation> vanishing_check(const BlockOperatorMatrix& b, const AngularOperator& q, Hypothesis h,
                                       const std::vector<double>& grid);

/// count points spanning the spectra of A and H with a margin of d on each side.
std::vector<double> spectral_grid(const BlockOperatorMatrix& b, int count);

}  // namespace opshift
