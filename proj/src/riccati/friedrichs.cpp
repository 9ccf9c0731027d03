#include "opshift/riccati/friedrichs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace opshift {

namespace {

constexpr int kScanCells = 512;
constexpr double kBisectionTolerance = 1e-13;
constexpr double kNodeClearance = 1e-12;
constexpr double kResidualTolerance = 1e-9;

}  // namespace

FriedrichsModel::FriedrichsModel(std::vector<Interval> support, int nodes_per_component,
                                 const std::function<Complex(double)>& coupling, double truncation)
    : support_(std::move(support)), truncation_(truncation)
{
    if (support_.empty() || nodes_per_component < 1 || !(truncation > 0.0)) {
        throw PreconditionError("FriedrichsModel: need a support, nodes and a positive truncation");
    }
    std::sort(support_.begin(), support_.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    for (std::size_t i = 0; i < support_.size(); ++i) {
        if (!(support_[i].lo < support_[i].hi)) {
            throw PreconditionError("FriedrichsModel: empty support interval");
        }
        if (i > 0 && support_[i].lo < support_[i - 1].hi) {
            throw PreconditionError("FriedrichsModel: support intervals overlap");
        }
    }
    for (const auto& iv : support_) {
        const double lo = std::max(iv.lo, -truncation_);
        const double hi = std::min(iv.hi, truncation_);
        if (!(lo < hi)) {
            throw PreconditionError("FriedrichsModel: support interval lies beyond the truncation");
        }
        const double h = (hi - lo) / nodes_per_component;
        for (int k = 0; k < nodes_per_component; ++k) {
            const double mu = lo + (k + 0.5) * h;
            nodes_.push_back(mu);
            weights_.push_back(h);
            coupling_.push_back(coupling(mu));
        }
    }
}

double FriedrichsModel::coupling_norm() const
{
    double s = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        s += weights_[k] * std::norm(coupling_[k]);
    }
    return std::sqrt(s);
}

std::vector<Interval> FriedrichsModel::gap_components() const
{
    std::vector<Interval> gaps;
    const double inf = std::numeric_limits<double>::infinity();
    if (support_.front().lo > -inf) {
        gaps.push_back({-inf, support_.front().lo});
    }
    for (std::size_t i = 0; i + 1 < support_.size(); ++i) {
        if (support_[i].hi < support_[i + 1].lo) {
            gaps.push_back({support_[i].hi, support_[i + 1].lo});
        }
    }
    if (support_.back().hi < inf) {
        gaps.push_back({support_.back().hi, inf});
    }
    return gaps;
}

double FriedrichsModel::herglotz(double w) const
{
    double s = w;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        s += weights_[k] * std::norm(coupling_[k]) / (nodes_[k] - w);
    }
    return s;
}

std::optional<FriedrichsSolution> friedrichs_solve(const FriedrichsModel& m)
{
    const double mass = m.coupling_norm() * m.coupling_norm();
    const auto [lo_node, hi_node] = std::minmax_element(m.nodes().begin(), m.nodes().end());
    // beyond these points |sum h|b|^2/(mu - w)| < sqrt(S), so f has the sign of w
    const double far_lo = std::min(0.0, *lo_node) - std::sqrt(mass) - 1.0;
    const double far_hi = std::max(0.0, *hi_node) + std::sqrt(mass) + 1.0;

    for (const auto& gap : m.gap_components()) {
        const double a = std::isfinite(gap.lo) ? gap.lo : std::min(far_lo, gap.hi - 1.0);
        const double b = std::isfinite(gap.hi) ? gap.hi : std::max(far_hi, gap.lo + 1.0);
        double left = a;
        double f_left = m.herglotz(left);
        bool found = false;
        double right = b;
        for (int i = 1; i <= kScanCells; ++i) {
            const double x = (i == kScanCells) ? b : a + (b - a) * i / kScanCells;
            const double fx = m.herglotz(x);
            if (f_left <= 0.0 && fx >= 0.0) {
                right = x;
                found = true;
                break;
            }
            left = x;
            f_left = fx;
        }
        if (!found) {
            continue;
        }
        while (right - left > kBisectionTolerance * std::max(1.0, std::abs(left))) {
            const double mid = 0.5 * (left + right);
            if (m.herglotz(mid) <= 0.0) {
                left = mid;
            } else {
                right = mid;
            }
        }
        const double w = 0.5 * (left + right);

        FriedrichsSolution sol;
        sol.w = w;
        sol.component = gap;
        sol.q.resize(m.nodes().size());
        Complex inner = 0.0;
        for (std::size_t k = 0; k < m.nodes().size(); ++k) {
            const double denom = w - m.nodes()[k];
            if (std::abs(denom) < kNodeClearance) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "friedrichs_solve: root " << w << " within " << kNodeClearance << " of node " << m.nodes()[k];
                throw SingularityError(msg.str());
            }
            sol.q[k] = m.coupling()[k] / denom;
            inner += m.weights()[k] * sol.q[k] * std::conj(m.coupling()[k]);
        }
        double r2 = 0.0;
        for (std::size_t k = 0; k < m.nodes().size(); ++k) {
            const Complex r = -m.nodes()[k] * sol.q[k] + inner * sol.q[k] - m.coupling()[k];
            r2 += m.weights()[k] * std::norm(r);
        }
        sol.residual = std::sqrt(r2);
        if (!(sol.residual <= kResidualTolerance * std::max(1.0, m.coupling_norm()))) {
            std::ostringstream msg;
            msg << "friedrichs_solve: Riccati residual " << sol.residual << " at root " << w;
            throw ConvergenceError(msg.str());
        }
        return sol;
    }
    return std::nullopt;
}

double sharpness_profile(double d, double epsilon, double mu)
{
    if (mu >= d) {
        return std::exp(-(mu - d) / (2.0 * epsilon)) / std::sqrt(epsilon);
    }
    if (mu <= -d) {
        return std::atan(d + mu) * std::exp(-(d - mu) / (2.0 * epsilon)) / std::sqrt(epsilon);
    }
    return 0.0;
}

std::vector<double> default_epsilon_grid(int count)
{
    std::vector<double> grid;
    for (int i = 0; i < count; ++i) {
        const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
        grid.push_back(std::pow(10.0, -4.0 + 4.0 * t));
    }
    return grid;
}

SharpnessReport friedrichs_sharpness(double d, double c, const std::vector<double>& eps_grid,
                                     int nodes_per_component, double truncation_factor)
{
    if (!(d > 0.0) || !(c > 0.0)) {
        throw PreconditionError("friedrichs_sharpness: d and c must be positive");
    }
    const double inf = std::numeric_limits<double>::infinity();
    const double truncation = truncation_factor * d;
    const std::vector<Interval> support{{-inf, -d}, {d, inf}};

    SharpnessReport report;
    report.d = d;
    report.c = c;
    report.all_solvable = true;
    for (double eps : eps_grid) {
        const FriedrichsModel raw(support, nodes_per_component,
                                  [&](double mu) { return Complex(sharpness_profile(d, eps, mu), 0.0); }, truncation);
        const double scale = std::sqrt(2.0) * c * d / raw.coupling_norm();
        const FriedrichsModel model(support, nodes_per_component,
                                    [&](double mu) { return Complex(scale * sharpness_profile(d, eps, mu), 0.0); },
                                    truncation);
        SharpnessPoint pt;
        pt.epsilon = eps;
        pt.b_norm = model.coupling_norm();
        pt.f_at_minus_d = model.herglotz(-d);
        pt.f_at_plus_d = model.herglotz(d);
        // mass of |phi|^2 beyond the cut: e^{-(L-d)/eps} on the right,
        // at most (pi/2)^2 e^{-(L+d)/eps} on the left
        const double pi = std::numbers::pi;
        const double tail = std::exp(-(truncation - d) / eps) + pi * pi / 4.0 * std::exp(-(truncation + d) / eps);
        pt.tail_bound = scale * scale * tail / (truncation - d);
        const auto sol = friedrichs_solve(model);
        pt.solvable = sol.has_value();
        if (sol) {
            pt.root = sol->w;
        }
        report.any_unsolvable = report.any_unsolvable || !pt.solvable;
        report.all_solvable = report.all_solvable && pt.solvable;
        report.points.push_back(pt);
    }
    if (report.points.empty()) {
        report.all_solvable = false;
        report.classification = "empty epsilon grid";
    } else if (report.any_unsolvable) {
        report.classification = "unsolvable instance found";
    } else if (c > 1.0) {
        report.classification = "grid exhausted without an unsolvable instance";
    } else {
        report.classification = "all solvable";
    }
    return report;
}

}  // namespace opshift
