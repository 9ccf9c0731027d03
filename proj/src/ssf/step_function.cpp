#include "opshift/ssf/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace opshift {

namespace {

// Representative points of the clustered union of breakpoints and of the gaps
// between clusters, at which two step functions are compared.
std::vector<double> probe_points(const StepFunction& f, const StepFunction& g, double tol)
{
    std::vector<double> all = f.breakpoints();
    all.insert(all.end(), g.breakpoints().begin(), g.breakpoints().end());
    std::sort(all.begin(), all.end());
    std::vector<std::pair<double, double>> clusters;  // [lo, hi]
    for (double x : all) {
        if (clusters.empty() || x - clusters.back().second > tol) {
            clusters.emplace_back(x, x);
        } else {
            clusters.back().second = x;
        }
    }
    std::vector<double> probes;
    if (clusters.empty()) {
        probes.push_back(0.0);
        return probes;
    }
    probes.push_back(clusters.front().first - 1.0);
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        const double next = k + 1 < clusters.size() ? clusters[k + 1].first : clusters[k].second + 2.0;
        probes.push_back(0.5 * (clusters[k].second + next));
    }
    return probes;
}

}  // namespace

StepFunction::StepFunction() : values_{0} {}

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<int> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values))
{
    require_shape(values_.size() == breakpoints_.size() + 1, "StepFunction: need one more value than breakpoints");
    for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
        if (!(breakpoints_[k - 1] < breakpoints_[k])) {
            throw PreconditionError("StepFunction: breakpoints must be strictly ascending");
        }
    }
}

StepFunction StepFunction::from_jumps(std::vector<std::pair<double, int>> jumps, double merge_tolerance)
{
    std::sort(jumps.begin(), jumps.end());
    std::vector<double> points;
    std::vector<int> values{0};
    std::size_t i = 0;
    int level = 0;
    while (i < jumps.size()) {
        std::size_t j = i;
        double sum = 0.0;
        int jump = 0;
        while (j < jumps.size() && jumps[j].first - jumps[i].first <= merge_tolerance) {
            sum += jumps[j].first;
            jump += jumps[j].second;
            ++j;
        }
        if (jump != 0) {
            level += jump;
            points.push_back(sum / static_cast<double>(j - i));
            values.push_back(level);
        }
        i = j;
    }
    return {std::move(points), std::move(values)};
}

int StepFunction::operator()(double lambda) const
{
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), lambda);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

std::optional<Interval> StepFunction::support() const
{
    if (breakpoints_.empty()) {
        return std::nullopt;
    }
    return Interval{breakpoints_.front(), breakpoints_.back()};
}

StepFunction StepFunction::operator-() const
{
    std::vector<int> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [](int x) { return -x; });
    return {breakpoints_, std::move(v)};
}

namespace {

std::vector<std::pair<double, int>> jumps_of(const StepFunction& f, int sign)
{
    std::vector<std::pair<double, int>> out;
    for (std::size_t k = 0; k < f.breakpoints().size(); ++k) {
        out.emplace_back(f.breakpoints()[k], sign * (f.values()[k + 1] - f.values()[k]));
    }
    return out;
}

}  // namespace

StepFunction add(const StepFunction& f, const StepFunction& g, double merge_tolerance)
{
    auto jumps = jumps_of(f, 1);
    const auto more = jumps_of(g, 1);
    jumps.insert(jumps.end(), more.begin(), more.end());
    return StepFunction::from_jumps(std::move(jumps), merge_tolerance);
}

StepFunction subtract(const StepFunction& f, const StepFunction& g, double merge_tolerance)
{
    auto jumps = jumps_of(f, 1);
    const auto more = jumps_of(g, -1);
    jumps.insert(jumps.end(), more.begin(), more.end());
    return StepFunction::from_jumps(std::move(jumps), merge_tolerance);
}

int max_difference(const StepFunction& f, const StepFunction& g, double merge_tolerance)
{
    int worst = 0;
    for (double x : probe_points(f, g, merge_tolerance)) {
        worst = std::max(worst, std::abs(f(x) - g(x)));
    }
    return worst;
}

bool equal_modulo_integers(const StepFunction& f, const StepFunction& g, double merge_tolerance)
{
    std::set<int> offsets;
    for (double x : probe_points(f, g, merge_tolerance)) {
        offsets.insert(f(x) - g(x));
    }
    return offsets.size() == 1;
}

double merge_tolerance_for(double spectral_radius)
{
    return 1e-10 * (1.0 + spectral_radius);
}

}  // namespace opshift
