#pragma once

#include <vector>

#include "opshift/core/types.hpp"

namespace opshift {

/// Odd L1 kernel f_d with  int e^{-ixt} f_d(t) dt = 1/x  for |x| >= d.
///
/// The base kernel is f(s) = i phi(s) with
///     phi(s) = sign(s) [1/2 - (1/pi) int_0^|s| sin(c r) e^{-sigma^2 r^2 / 4} / r dr],
/// whose transform is (1/w) [1 - (erf((w + c)/sigma) - erf((w - c)/sigma)) / 2].
/// With c = 1/2 and sigma = 1/10 that equals 1/w to about 1e-12 once |w| >= 1,
/// and phi decays like a Gaussian, so a short truncated time grid suffices.
/// f_d(t) = f(d t).
///
/// Nodes live on (0, T]; the negative half of the symmetric grid follows from
/// oddness and is never stored.
class FourierKernel {
public:
    static constexpr double kCutoff = 0.5;
    static constexpr double kSmoothing = 0.1;
    /// Truncation point in scaled time s = d t.
    static constexpr double kDefaultHorizon = 115.0;

    /// Kernel for gaps >= d, resolving frequencies up to `max_frequency`.
    FourierKernel(double d, double max_frequency, double tolerance = 1e-6,
                  double horizon = kDefaultHorizon);

    double gap() const { return d_; }
    double max_frequency() const { return max_frequency_; }
    double tolerance() const { return tolerance_; }
    double horizon() const { return horizon_ / d_; }

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& weights() const { return weights_; }
    /// phi(d t_j) at each node; f_d(t_j) = i * profile_j.
    const std::vector<double>& profile() const { return profile_; }
    Complex sample(Index j) const { return {0.0, profile_[static_cast<std::size_t>(j)]}; }

    /// int e^{-ixt} f_d(t) dt by the stored quadrature.
    double transfer(double x) const;

    /// Largest |transfer(x) - 1/x| over a sweep of |x| in [d, max(10 d, max_frequency)].
    double transform_error() const { return transform_error_; }
    bool valid() const { return transform_error_ <= tolerance_; }

    /// Exact transform of the unscaled kernel.
    static double base_transform(double w);

private:
    double d_;
    double max_frequency_;
    double tolerance_;
    double horizon_;
    std::vector<double> times_;
    std::vector<double> weights_;
    std::vector<double> profile_;
    double transform_error_ = 0.0;
};

}  // namespace opshift
