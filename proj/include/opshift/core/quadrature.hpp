#pragma once

#include <functional>
#include <span>
#include <vector>

namespace opshift {

/// Nodes and weights of a composite rule on a union of panels.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    double integrate(const std::function<double(double)>& f) const;
};

/// Points per Gauss-Legendre panel used by the composite rules.
inline constexpr int kGaussPanelOrder = 16;

/// 16-point Gauss-Legendre rule on each consecutive pair of `breaks`.
QuadratureRule composite_gauss_legendre(std::span<const double> breaks);

/// Uniform panels of width at most `max_width` covering [a, b].
QuadratureRule uniform_gauss_legendre(double a, double b, double max_width);

/// Panels on [0, T] starting at width h0 and doubling until T is reached.
QuadratureRule graded_gauss_legendre(double horizon, double first_width);

/// Adaptive Gauss-Kronrod integral of a smooth function on [a, b]; the
/// tolerance is relative to the integral of |f|.
double adaptive_integral(const std::function<double(double)>& f, double a, double b,
                         double tolerance = 1e-12);

}  // namespace opshift
