#pragma once

#include <string>
#include <vector>

#include "opshift/sylvester/fourier_kernel.hpp"
#include "opshift/sylvester/problem.hpp"

namespace opshift {

struct Circle {
    Complex center;
    double radius = 0.0;
};

/// Union of positively oriented circles for the resolvent contour integral.
struct ContourSpec {
    std::vector<Circle> circles;
    int initial_nodes = 32;       // per circle, doubled until converged
    int max_nodes = 1 << 16;      // per circle
    double tolerance = 1e-10;     // relative change between doublings
    int orientation = 1;
};

/// One circle per eigenvalue cluster of C, radius half the distance from the
/// cluster to the nearest other eigenvalue of A or C.
ContourSpec default_contour(const SylvesterProblem& p);

/// Winding number of the discretized contour around a point.
double winding_number(const ContourSpec& c, Complex point, int nodes_per_circle);

/// Kronecker-vectorized dense solve: (A^T (x) I - I (x) C) vec X = vec Y.
GeneralOperator solve_oracle(const SylvesterProblem& p);

/// Primal: X = sum_k P_k Y (A - mu_k)^{-1} over eigenvalue clusters mu_k of C.
/// Dual:   Z = -sum_k (A - mu_k)^{-1} Y^* P_k, the solution of ZC - AZ = Y^*.
GeneralOperator solve_stieltjes(const SylvesterProblem& p, bool dual = false);

/// X = sum_{k,l} P_k^C Y P_l^A / (lambda_l - mu_k).
GeneralOperator solve_double_stieltjes(const SylvesterProblem& p);

/// (1/2 pi i) oint (zeta - C)^{-1} Y (A - zeta)^{-1} d zeta by nested trapezoid sums.
GeneralOperator solve_contour(const SylvesterProblem& p, const ContourSpec& c);
GeneralOperator solve_contour(const SylvesterProblem& p);

/// int_0^inf e^{Ct} Y e^{-At} dt; needs max spec C < min spec A.
GeneralOperator solve_exponential(const SylvesterProblem& p);

/// int e^{itC} Y e^{-itA} f_d(t) dt.
GeneralOperator solve_fourier(const SylvesterProblem& p, const FourierKernel& k);
GeneralOperator solve_fourier(const SylvesterProblem& p);

/// Kernel matched to the problem's gap and spectral spread.
FourierKernel kernel_for(const SylvesterProblem& p);

enum class SylvesterMethod {
    oracle,
    stieltjes,
    stieltjes_dual,
    double_stieltjes,
    contour,
    exponential,
    fourier,
};

std::string method_name(SylvesterMethod m);
/// Default-configured solve. For stieltjes_dual the returned matrix is -Z^*,
/// i.e. it is comparable with X.
GeneralOperator solve(const SylvesterProblem& p, SylvesterMethod m);
/// Whether the method's preconditions hold for p.
bool applicable(const SylvesterProblem& p, SylvesterMethod m);

struct SolverReport {
    std::string method;
    double residual = 0.0;
    double oracle_deviation = 0.0;  // relative Frobenius
    BoundMargins bound_margins;
    double seconds = 0.0;
};

SolverReport run_solver(const SylvesterProblem& p, SylvesterMethod m, const GeneralOperator& oracle);

}  // namespace opshift
