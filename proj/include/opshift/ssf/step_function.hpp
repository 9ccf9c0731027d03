#pragma once

#include <optional>
#include <vector>

#include "opshift/core/hermitian.hpp"

namespace opshift {

/// Integer-valued, finitely supported step function, continuous from the right:
/// on [b_k, b_{k+1}) it takes values[k + 1]; values.front() and values.back()
/// are the values to the left of b_0 and from the last breakpoint on (both 0
/// for a finitely supported function).
class StepFunction {
public:
    StepFunction();
    StepFunction(std::vector<double> breakpoints, std::vector<int> values);

    /// Sum of unit-or-larger jumps placed at the given points. Points closer
    /// than merge_tolerance are merged; breakpoints with zero net jump vanish.
    static StepFunction from_jumps(std::vector<std::pair<double, int>> jumps, double merge_tolerance);

    int operator()(double lambda) const;
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<int>& values() const { return values_; }
    bool is_zero() const { return breakpoints_.empty() && values_.front() == 0; }
    /// [first breakpoint, last breakpoint) or nothing for the zero function.
    std::optional<Interval> support() const;

    /// Exact sum over the pieces of value * (phi(b_{k+1}) - phi(b_k)),
    /// i.e. int phi'(lambda) xi(lambda) d lambda for a finitely supported xi.
    template <typename F>
    double integrate_derivative(F&& phi) const
    {
        double sum = 0.0;
        for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
            if (values_[k + 1] != 0) {
                sum += values_[k + 1] * (phi(breakpoints_[k + 1]) - phi(breakpoints_[k]));
            }
        }
        return sum;
    }

    StepFunction operator-() const;

private:
    std::vector<double> breakpoints_;
    std::vector<int> values_;
};

/// Pointwise sum; breakpoints of the operands closer than merge_tolerance are merged.
StepFunction add(const StepFunction& f, const StepFunction& g, double merge_tolerance);
StepFunction subtract(const StepFunction& f, const StepFunction& g, double merge_tolerance);

/// max |f - g| over the union of breakpoints (clustered at merge_tolerance)
/// and the open pieces between them.
int max_difference(const StepFunction& f, const StepFunction& g, double merge_tolerance);
/// Whether f - g is an integer constant (always true for integer-valued step
/// functions that agree at infinity; kept for comparisons stated modulo Z).
bool equal_modulo_integers(const StepFunction& f, const StepFunction& g, double merge_tolerance);

/// Breakpoint merging tolerance 1e-10 (1 + r).
double merge_tolerance_for(double spectral_radius);

}  // namespace opshift
