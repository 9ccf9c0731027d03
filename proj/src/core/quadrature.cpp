#include "opshift/core/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "opshift/core/types.hpp"

namespace opshift {

namespace {

using Gauss = boost::math::quadrature::gauss<double, kGaussPanelOrder>;

void append_panel(QuadratureRule& rule, double a, double b)
{
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const auto& x = Gauss::abscissa();
    const auto& w = Gauss::weights();
    // even order: boost stores the positive half only, ascending
    for (std::size_t k = x.size(); k-- > 0;) {
        rule.nodes.push_back(mid - half * x[k]);
        rule.weights.push_back(half * w[k]);
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        rule.nodes.push_back(mid + half * x[k]);
        rule.weights.push_back(half * w[k]);
    }
}

}  // namespace

double QuadratureRule::integrate(const std::function<double(double)>& f) const
{
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        sum += weights[k] * f(nodes[k]);
    }
    return sum;
}

QuadratureRule composite_gauss_legendre(std::span<const double> breaks)
{
    QuadratureRule rule;
    if (breaks.size() < 2) {
        return rule;
    }
    rule.nodes.reserve((breaks.size() - 1) * kGaussPanelOrder);
    rule.weights.reserve((breaks.size() - 1) * kGaussPanelOrder);
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        append_panel(rule, breaks[k], breaks[k + 1]);
    }
    return rule;
}

QuadratureRule uniform_gauss_legendre(double a, double b, double max_width)
{
    if (!(b > a) || !(max_width > 0.0)) {
        throw PreconditionError("uniform_gauss_legendre: need a < b and positive width");
    }
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_width));
    std::vector<double> breaks(panels + 1);
    for (std::size_t k = 0; k <= panels; ++k) {
        breaks[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(panels);
    }
    breaks.back() = b;
    return composite_gauss_legendre(breaks);
}

QuadratureRule graded_gauss_legendre(double horizon, double first_width)
{
    if (!(horizon > 0.0) || !(first_width > 0.0)) {
        throw PreconditionError("graded_gauss_legendre: need positive horizon and width");
    }
    std::vector<double> breaks{0.0};
    double width = std::min(first_width, horizon);
    while (breaks.back() < horizon) {
        breaks.push_back(std::min(horizon, breaks.back() + width));
        width *= 2.0;
    }
    return composite_gauss_legendre(breaks);
}

double adaptive_integral(const std::function<double(double)>& f, double a, double b, double tolerance)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    if (a == b) {
        return 0.0;
    }
    // Boost measures the tolerance against |integral|; rescale it so the
    // target is tolerance * int |f|, otherwise cancelling integrands refine forever
    double l1 = 0.0;
    const double rough = GK::integrate(f, a, b, 0, tolerance, nullptr, &l1);
    if (l1 == 0.0) {
        return 0.0;
    }
    if (rough == 0.0) {
        const double mid = 0.5 * (a + b);
        return adaptive_integral(f, a, mid, tolerance) + adaptive_integral(f, mid, b, tolerance);
    }
    const double rel = std::max(tolerance, tolerance * l1 / std::abs(rough));
    return GK::integrate(f, a, b, 20, rel);
}

}  // namespace opshift
