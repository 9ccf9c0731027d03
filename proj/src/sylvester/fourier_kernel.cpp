#include "opshift/sylvester/fourier_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "opshift/core/quadrature.hpp"

namespace opshift {

namespace {

using Gauss = boost::math::quadrature::gauss<double, kGaussPanelOrder>;

double integrand(double r)
{
    constexpr double c = FourierKernel::kCutoff;
    constexpr double s = FourierKernel::kSmoothing;
    return std::sin(c * r) / r * std::exp(-s * s * r * r / 4.0);
}

double gauss_on(double a, double b)
{
    if (b <= a) {
        return 0.0;
    }
    return Gauss::integrate(integrand, a, b);
}

}  // namespace

double FourierKernel::base_transform(double w)
{
    return (1.0 - 0.5 * (std::erf((w + kCutoff) / kSmoothing) - std::erf((w - kCutoff) / kSmoothing))) / w;
}

FourierKernel::FourierKernel(double d, double max_frequency, double tolerance, double horizon)
    : d_(d), max_frequency_(std::max(max_frequency, d)), tolerance_(tolerance), horizon_(horizon)
{
    if (!(d > 0.0) || !(tolerance > 0.0) || !(horizon > 0.0)) {
        throw PreconditionError("FourierKernel: gap, tolerance and horizon must be positive");
    }
    // scaled frequencies go up to w_max; 16 nodes per 6 radians of the fastest mode
    const double w_max = max_frequency_ / d_;
    const double width = std::min(1.0, 6.0 / w_max);
    const QuadratureRule rule = uniform_gauss_legendre(0.0, horizon_, width);

    // cumulative int_0^s of the integrand at each node, panel by panel
    const std::size_t n = rule.size();
    times_.resize(n);
    weights_.resize(n);
    profile_.resize(n);
    const auto panels = n / kGaussPanelOrder;
    const double panel_width = horizon_ / static_cast<double>(panels);
    double accumulated = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) * panel_width;
        const double b = (p + 1 == panels) ? horizon_ : a + panel_width;
        for (std::size_t j = p * kGaussPanelOrder; j < (p + 1) * kGaussPanelOrder; ++j) {
            const double s = rule.nodes[j];
            const double k = accumulated + gauss_on(a, s);
            profile_[j] = 0.5 - k / std::numbers::pi;
            times_[j] = s / d_;
            weights_[j] = rule.weights[j] / d_;
        }
        accumulated += gauss_on(a, b);
    }

    const double top = std::max(10.0 * d_, max_frequency_);
    constexpr int samples = 64;
    for (int i = 0; i <= samples; ++i) {
        const double x = d_ * std::pow(top / d_, static_cast<double>(i) / samples);
        transform_error_ = std::max(transform_error_, std::abs(transfer(x) - 1.0 / x));
    }
}

double FourierKernel::transfer(double x) const
{
    // f_d = i phi_d is odd: int e^{-ixt} i phi_d(t) dt = 2 int_0^inf sin(xt) phi_d(t) dt
    double sum = 0.0;
    for (std::size_t j = 0; j < times_.size(); ++j) {
        sum += weights_[j] * profile_[j] * std::sin(x * times_[j]);
    }
    return 2.0 * sum;
}

}  // namespace opshift
