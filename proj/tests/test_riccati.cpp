#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "opshift/core/norms.hpp"
#include "opshift/riccati/friedrichs.hpp"
#include "opshift/riccati/iteration.hpp"
#include "opshift/sylvester/solvers.hpp"
#include "test_helpers.hpp"

using namespace opshift;
using opshift::testing::separated_spectra;

namespace {

ComplexMatrix scalar_matrix(double v)
{
    ComplexMatrix m(1, 1);
    m(0, 0) = v;
    return m;
}

RiccatiProblem scalar_problem(double a, double c, double b, double d)
{
    return {HermitianOperator::diagonal({a}), HermitianOperator::diagonal({c}), scalar_matrix(b), scalar_matrix(d)};
}

const double kScalarRoot = (1.0 - std::sqrt(1.16)) / 0.4;

/// Random problem with B and D scaled so sqrt(|B| |D|_E) = fraction * d/2.
RiccatiProblem certified_problem(Rng& rng, Index m, Index n, double gap, double fraction)
{
    auto [a, c] = separated_spectra(rng, n, m, gap);
    const auto ah = random_hermitian_with_spectrum(rng, a);
    const auto ch = random_hermitian_with_spectrum(rng, c);
    ComplexMatrix b = gaussian_matrix(rng, n, m);
    ComplexMatrix d = gaussian_matrix(rng, m, n);
    const double d_gap = spec_distance(ah, ch);
    const double target = fraction * d_gap / 2.0;
    b *= target / operator_norm(b);
    d *= target / ec_norm(d, ch.decomposition());
    return {ah, ch, b, d};
}

}  // namespace

TEST_CASE("existence_report: arithmetic examples")
{
    const auto weak = scalar_problem(0.0, 1.0, 0.2, 0.2);
    const auto r = existence_report(weak);
    CHECK(r.gap == 1.0);
    CHECK(r.weak_condition);
    CHECK(r.strong_condition);
    CHECK(r.contraction_sum_weak);  // 0.4 < 2/pi
    REQUIRE(r.predicted_norm_bound);
    CHECK(*r.predicted_norm_bound ==
          doctest::Approx((1.0 / std::numbers::pi - std::sqrt(1.0 / (std::numbers::pi * std::numbers::pi) - 0.04)) / 0.2));

    const auto strong = scalar_problem(0.0, 1.0, 0.3, 0.3);
    const auto s = existence_report(strong);
    CHECK(s.strong_condition);
    CHECK(s.weak_condition);  // 0.3 < 1/pi = 0.318
    REQUIRE(s.predicted_ec_bound);
    CHECK(*s.predicted_ec_bound == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    REQUIRE(s.strong_radius_range);
    CHECK(s.strong_radius_range->hi == doctest::Approx((1.0 - 0.3) / 0.3));

    const auto zero_b = scalar_problem(0.0, 1.0, 0.0, 0.5);
    const auto z = existence_report(zero_b);
    CHECK(z.sylvester_reduction);
    CHECK(z.weak_condition);
    CHECK(*z.predicted_norm_bound == doctest::Approx(std::numbers::pi * 0.5 / 2.0));
    CHECK(*z.predicted_ec_bound == doctest::Approx(0.5));

    const auto big = existence_report(scalar_problem(0.0, 1.0, 1.0, 1.0));
    CHECK_FALSE(big.strong_condition);
    CHECK_FALSE(big.predicted_ec_bound.has_value());
    CHECK_FALSE(big.predicted_norm_bound.has_value());
}

TEST_CASE("existence_report: weak condition boundary")
{
    // sqrt(0.09) = 0.3 < 1/pi = 0.3183
    CHECK(existence_report(scalar_problem(0.0, 1.0, 0.3, 0.3)).weak_condition == (0.3 < 1.0 / std::numbers::pi));
    CHECK_FALSE(existence_report(scalar_problem(0.0, 1.0, 0.33, 0.33)).weak_condition);
}

TEST_CASE("riccati_residual and the dual identity")
{
    const auto p = scalar_problem(0.0, 1.0, 0.2, 0.2);
    CHECK(riccati_residual(scalar_matrix(kScalarRoot), p) <= 1e-12);
    CHECK(dual_riccati_check(scalar_matrix(kScalarRoot), p) <= 1e-12);
    const auto zero = scalar_problem(0.0, 1.0, 0.2, 0.0);
    CHECK(riccati_residual(scalar_matrix(0.0), zero) == 0.0);
    CHECK(riccati_residual(scalar_matrix(0.0), p) == doctest::Approx(0.2));
    CHECK_THROWS_AS(riccati_residual(ComplexMatrix::Zero(2, 1), p), ShapeError);

    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto q = certified_problem(rng, 4, 3, 0.5, 0.9);
        const ComplexMatrix x = gaussian_matrix(rng, 4, 3);
        CHECK(std::abs(riccati_residual(x, q) - dual_riccati_check(x, q)) <= 1e-12 * (1.0 + riccati_residual(x, q)));
    }
}

TEST_CASE("iterate_stieltjes: trivial, Sylvester reduction, scalar root")
{
    const auto zero = scalar_problem(0.0, 1.0, 0.0, 0.0);
    const auto z = iterate_stieltjes(zero);
    CHECK(z.q.norm() == 0.0);
    CHECK(z.trace.rows.size() == 1);

    Rng rng(14);
    auto [a, c] = separated_spectra(rng, 3, 4, 0.5);
    const auto ah = random_hermitian_with_spectrum(rng, a);
    const auto ch = random_hermitian_with_spectrum(rng, c);
    const ComplexMatrix d = gaussian_matrix(rng, 4, 3);
    const RiccatiProblem syl(ah, ch, ComplexMatrix::Zero(3, 4), d);
    const auto s = iterate_stieltjes(syl);
    CHECK(opshift::testing::rel_frobenius(s.q, solve_stieltjes(SylvesterProblem(ah, ch, d))) <= 1e-12);

    const auto p = scalar_problem(0.0, 1.0, 0.2, 0.2);
    const auto r = iterate_stieltjes(p);
    CHECK(r.trace.converged);
    CHECK(std::abs(r.q(0, 0) - kScalarRoot) <= 1e-10);
    CHECK(r.trace.final_residual <= 1e-10);
    CHECK(r.trace.observed_contraction < 1.0);
}

TEST_CASE("iterate_stieltjes: certified random instances obey the a-priori bounds")
{
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = certified_problem(rng, 2 + trial % 5, 2 + trial % 4, 0.2 + 0.2 * trial, 0.9);
        const auto cert = existence_report(p);
        REQUIRE(cert.strong_condition);
        const auto sol = iterate_stieltjes(p);
        CHECK(sol.trace.converged);
        CHECK(sol.trace.rows.size() <= 200);
        CHECK(sol.trace.final_residual <= 1e-10);
        CHECK(ec_norm(sol.q, p.c().decomposition()) <= *cert.predicted_ec_bound + 1e-9);
        CHECK(operator_norm(sol.q) < cert.strong_ball_radius());
        if (cert.contraction_sum_strong) {
            CHECK(operator_norm(sol.q) < 1.0);
        }
        if (cert.weak_condition) {
            CHECK(operator_norm(sol.q) <= *cert.predicted_norm_bound + 1e-9);
        }
    }
}

TEST_CASE("iterate_stieltjes: precondition and failure modes")
{
    const auto big = scalar_problem(0.0, 1.0, 1.0, 1.0);
    CHECK_THROWS_AS(iterate_stieltjes(big), PreconditionError);
    RiccatiOptions opts;
    opts.override_certificate = true;
    opts.max_iterations = 5;
    // q <- 1 / (q - 1) does converge, but not to 1e-10 in five steps
    CHECK_THROWS_AS(iterate_stieltjes(big, std::nullopt, opts), Error);
}

TEST_CASE("iterate_fourier agrees with iterate_stieltjes")
{
    const auto zero = scalar_problem(0.0, 1.0, 0.0, 0.0);
    CHECK(iterate_fourier(zero).q.norm() == 0.0);

    const auto p = scalar_problem(0.0, 1.0, 0.2, 0.2);
    CHECK(std::abs(iterate_fourier(p).q(0, 0) - kScalarRoot) <= 1e-6);

    Rng rng(19);
    int compared = 0;
    for (int trial = 0; trial < 20 && compared < 6; ++trial) {
        const auto q = certified_problem(rng, 3, 3, 1.0, 0.5);
        const auto cert = existence_report(q);
        if (!cert.weak_condition) {
            continue;
        }
        const auto f = iterate_fourier(q);
        const auto s = iterate_stieltjes(q);
        CHECK((f.q - s.q).norm() <= 1e-6);
        ++compared;
    }
    CHECK(compared > 0);
}

TEST_CASE("fixed point depends continuously on B and D")
{
    Rng rng(23);
    const auto p = certified_problem(rng, 3, 4, 1.0, 0.7);
    const ComplexMatrix q = iterate_stieltjes(p).q;
    double max_slope = 0.0;
    for (int dir = 0; dir < 10; ++dir) {
        ComplexMatrix db = gaussian_matrix(rng, p.b().rows(), p.b().cols());
        ComplexMatrix dd = gaussian_matrix(rng, p.d().rows(), p.d().cols());
        db /= db.norm();
        dd /= dd.norm();
        auto moved = [&](double delta) {
            const RiccatiProblem pp(p.a(), p.c(), p.b() + delta * db, p.d() + delta * dd);
            RiccatiOptions opts;
            opts.residual_tol = 1e-13;
            return iterate_stieltjes(pp, std::nullopt, opts).q;
        };
        const double s1 = (moved(1e-6) - q).norm() / 1e-6;
        const double s2 = (moved(5e-7) - q).norm() / 5e-7;
        CHECK(std::abs(s1 - s2) <= 1e-2 * (1.0 + s1));
        max_slope = std::max(max_slope, s1);
    }
    CHECK(max_slope < 1e3);
}

TEST_CASE("trace csv has a fixed header and one row per iteration")
{
    const auto r = iterate_stieltjes(scalar_problem(0.0, 1.0, 0.2, 0.2));
    std::ostringstream out;
    write_trace_csv(out, r.trace);
    const std::string text = out.str();
    CHECK(text.rfind("iter,residual,q_norm,contraction\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(r.trace.rows.size()) + 1);
}

TEST_CASE("friedrichs: zero coupling, guaranteed root, full line")
{
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<Interval> split{{-inf, -1.0}, {1.0, inf}};
    const FriedrichsModel zero(split, 1000, [](double) { return Complex(0.0); }, 50.0);
    const auto z = friedrichs_solve(zero);
    REQUIRE(z);
    CHECK(std::abs(z->w) <= 1e-12);
    CHECK(std::all_of(z->q.begin(), z->q.end(), [](Complex v) { return v == Complex(0.0); }));

    // |b| = 1 < sqrt(2): a root exists in (-1, 1)
    const FriedrichsModel raw(split, 10000, [](double mu) { return Complex(sharpness_profile(1.0, 0.1, mu)); }, 50.0);
    const double scale = 1.0 / raw.coupling_norm();
    const FriedrichsModel unit(split, 10000,
                               [&](double mu) { return Complex(scale * sharpness_profile(1.0, 0.1, mu)); }, 50.0);
    CHECK(unit.coupling_norm() == doctest::Approx(1.0).epsilon(1e-12));
    const auto u = friedrichs_solve(unit);
    REQUIRE(u);
    CHECK(u->w > -1.0);
    CHECK(u->w < 1.0);
    CHECK(std::abs(unit.herglotz(u->w)) <= 1e-10);
    CHECK(u->residual <= 1e-9);

    const FriedrichsModel line({{-inf, inf}}, 20000, [](double mu) { return Complex(1.0 / (1.0 + mu * mu)); }, 50.0);
    CHECK(line.gap_components().empty());
    CHECK_FALSE(friedrichs_solve(line).has_value());
}

TEST_CASE("friedrichs: bounded support has roots in outer components")
{
    const FriedrichsModel m({{0.0, 1.0}}, 200, [](double) { return Complex(1.0, 1.0); }, 10.0);
    const auto gaps = m.gap_components();
    REQUIRE(gaps.size() == 2);
    const auto sol = friedrichs_solve(m);
    REQUIRE(sol);
    CHECK(sol->w < 0.0);
    CHECK(sol->residual <= 1e-9);
}

TEST_CASE("friedrichs sharpness: c = 1.2 fails, |b| <= sqrt(2) d succeeds")
{
    const auto grid = default_epsilon_grid(9);
    CHECK(grid.front() == doctest::Approx(1e-4));
    CHECK(grid.back() == doctest::Approx(1.0));

    const auto over = friedrichs_sharpness(1.0, 1.2, grid, 2000);
    CHECK(over.any_unsolvable);
    CHECK(over.classification == "unsolvable instance found");
    CHECK_FALSE(over.points.front().solvable);

    const auto edge = friedrichs_sharpness(1.0, 1.0, grid, 2000);
    CHECK(edge.all_solvable);
    for (const auto& pt : edge.points) {
        CHECK(pt.b_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(pt.f_at_minus_d < 0.0);
        CHECK(pt.f_at_plus_d > 0.0);
    }

    const auto half = friedrichs_sharpness(2.0, 0.5, grid, 2000);
    CHECK(half.all_solvable);
    CHECK(half.classification == "all solvable");
}
