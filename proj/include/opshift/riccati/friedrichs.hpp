#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opshift/core/hermitian.hpp"

namespace opshift {

/// Discretized Friedrichs model: A = 0 on C, C = multiplication by mu on
/// L2(Delta), B f = <f, b>, D = B^*. Delta is a union of disjoint open
/// intervals; infinite ends are cut at +-truncation and every component is
/// sampled by the composite midpoint rule.
class FriedrichsModel {
public:
    FriedrichsModel(std::vector<Interval> support, int nodes_per_component,
                    const std::function<Complex(double)>& coupling, double truncation);

    const std::vector<Interval>& support() const { return support_; }
    double truncation() const { return truncation_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<Complex>& coupling() const { return coupling_; }

    /// Discrete |b| = sqrt(sum h_k |b_k|^2).
    double coupling_norm() const;
    /// Closed components of R \ Delta (endpoints may be infinite).
    std::vector<Interval> gap_components() const;
    /// f(w) = w + sum h_k |b_k|^2 / (mu_k - w)
    double herglotz(double w) const;

private:
    std::vector<Interval> support_;
    double truncation_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<Complex> coupling_;
};

struct FriedrichsSolution {
    double w = 0.0;
    std::vector<Complex> q;  // q_k = b_k / (w - mu_k)
    double residual = 0.0;   // weighted L2 norm of -mu q + <q, b> q - b
    Interval component;
};

/// Root of f in a gap component, located by a 512-cell scan and bisection.
/// Empty when f has no sign change on any gap component.
std::optional<FriedrichsSolution> friedrichs_solve(const FriedrichsModel& m);

struct SharpnessPoint {
    double epsilon = 0.0;
    double b_norm = 0.0;
    bool solvable = false;
    std::optional<double> root;
    double f_at_minus_d = 0.0;
    double f_at_plus_d = 0.0;
    /// |b|^2 beyond the truncation point over its distance to the gap.
    double tail_bound = 0.0;
};

struct SharpnessReport {
    double d = 0.0;
    double c = 0.0;
    std::vector<SharpnessPoint> points;
    bool any_unsolvable = false;
    bool all_solvable = false;
    std::string classification;
};

/// phi_eps on Delta = (-inf, -d) u (d, inf) with omega(t) = e^{-t}:
///   mu >= d : omega_eps^{1/2}(mu - d)
///   mu <= -d: arctan(d + mu) omega_eps^{1/2}(d - mu)
double sharpness_profile(double d, double epsilon, double mu);

/// Logarithmic grid of `count` points in [1e-4, 1].
std::vector<double> default_epsilon_grid(int count = 17);

/// For each epsilon, b = sqrt(2) c d phi_eps / |phi_eps| and whether f has a
/// root in [-d, d]. c <= 1 gives |b| <= sqrt(2) d, which is always solvable.
SharpnessReport friedrichs_sharpness(double d, double c, const std::vector<double>& eps_grid,
                                     int nodes_per_component = 10000, double truncation_factor = 50.0);

}  // namespace opshift
