#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "opshift/riccati/problem.hpp"
#include "opshift/sylvester/fourier_kernel.hpp"

namespace opshift {

struct RiccatiOptions {
    double residual_tol = 1e-10;
    int max_iterations = 200;
    /// Iterates whose dist(spec(A + BQ), spec C) falls below this are rejected.
    double gap_floor = 1e-8;
    /// Declared stagnant after `stagnation_window` consecutive residual
    /// ratios above `stagnation_ratio`.
    double stagnation_ratio = 0.999;
    int stagnation_window = 10;
    /// Run even when the existence certificate does not hold.
    bool override_certificate = false;
};

struct TraceRow {
    int iter = 0;
    double residual = 0.0;
    double q_norm = 0.0;
    double contraction = 0.0;  // |Q_k - Q_{k-1}| / |Q_{k-1} - Q_{k-2}|, 0 when undefined
};

struct IterationTrace {
    std::vector<TraceRow> rows;
    bool converged = false;
    double final_residual = 0.0;
    /// Geometric mean of the step ratios over the run.
    double observed_contraction = 0.0;
};

/// Columns: iter,residual,q_norm,contraction
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

struct RiccatiSolution {
    GeneralOperator q;
    IterationTrace trace;
};

/// Q <- sum_k P_k D (A + BQ - mu_k)^{-1}, the Stieltjes form of the Sylvester
/// equation Q(A + BQ) - CQ = D. Requires the strong condition unless overridden.
RiccatiSolution iterate_stieltjes(const RiccatiProblem& p, const std::optional<GeneralOperator>& q0 = std::nullopt,
                                  const RiccatiOptions& opts = {});

/// Q <- int e^{itC} (D - QBQ) e^{-itA} f_d(t) dt. Requires the weak condition
/// unless overridden.
RiccatiSolution iterate_fourier(const RiccatiProblem& p, const FourierKernel& k,
                                const std::optional<GeneralOperator>& q0 = std::nullopt,
                                const RiccatiOptions& opts = {});
RiccatiSolution iterate_fourier(const RiccatiProblem& p, const std::optional<GeneralOperator>& q0 = std::nullopt,
                                const RiccatiOptions& opts = {});

}  // namespace opshift
