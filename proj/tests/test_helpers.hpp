#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "opshift/core/functions.hpp"
#include "opshift/core/hermitian.hpp"
#include "opshift/core/norms.hpp"
#include "opshift/core/random.hpp"

namespace opshift::testing {

inline double rel_frobenius(const ComplexMatrix& x, const ComplexMatrix& ref)
{
    const double scale = std::max(ref.norm(), 1e-300);
    return (x - ref).norm() / (ref.norm() == 0.0 ? 1.0 : scale);
}

inline double max_abs(const ComplexMatrix& m)
{
    return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

/// Sorted vector of uniform draws.
inline RealVector sorted_uniform(Rng& rng, Index n, double lo, double hi)
{
    RealVector v(n);
    for (Index k = 0; k < n; ++k) {
        v(k) = uniform(rng, lo, hi);
    }
    std::sort(v.data(), v.data() + n);
    return v;
}

/// Every set partition of {0, ..., k-1}, as a block label per element.
inline std::vector<std::vector<int>> set_partitions(int k)
{
    std::vector<std::vector<int>> out;
    std::vector<int> labels(static_cast<std::size_t>(k), 0);
    std::function<void(int, int)> rec = [&](int pos, int used) {
        if (pos == k) {
            out.push_back(labels);
            return;
        }
        for (int b = 0; b <= used; ++b) {
            labels[static_cast<std::size_t>(pos)] = b;
            rec(pos + 1, std::max(used, b + 1));
        }
    };
    if (k > 0) {
        rec(0, 0);
    }
    return out;
}

/// Supremum over all partitions of the distinct eigenvalues into Borel groups
/// of sqrt(sum |E(group) Y|^2), by exhaustive enumeration. Exponential cost:
/// use only for a handful of distinct eigenvalues.
inline double ec_norm_by_enumeration(const ComplexMatrix& y, const SpectralDecomposition& d)
{
    const int k = static_cast<int>(d.clusters().size());
    double best = 0.0;
    for (const auto& labels : set_partitions(k)) {
        const int groups = *std::max_element(labels.begin(), labels.end()) + 1;
        double sum = 0.0;
        for (int g = 0; g < groups; ++g) {
            ComplexMatrix p = ComplexMatrix::Zero(d.dim(), d.dim());
            for (int c = 0; c < k; ++c) {
                if (labels[static_cast<std::size_t>(c)] == g) {
                    p += d.cluster_projector(static_cast<std::size_t>(c));
                }
            }
            const double n = operator_norm(p * y);
            sum += n * n;
        }
        best = std::max(best, std::sqrt(sum));
    }
    return best;
}

}  // namespace opshift::testing

namespace opshift::testing {

/// Spectra for A (n) and C (m) in [-width, width] with dist(spec A, spec C) >= gap.
inline std::pair<RealVector, RealVector> separated_spectra(Rng& rng, Index n, Index m, double gap,
                                                           double width = 3.0)
{
    RealVector c = sorted_uniform(rng, m, -width, width);
    RealVector a(n);
    for (Index k = 0; k < n; ++k) {
        double x;
        do {
            x = uniform(rng, -width - gap, width + gap);
        } while (distance_to_set(x, c) < gap);
        a(k) = x;
    }
    std::sort(a.data(), a.data() + n);
    return {a, c};
}

}  // namespace opshift::testing
