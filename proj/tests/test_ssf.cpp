#include <doctest.h>

#include <cmath>
#include <numbers>

#include "opshift/core/norms.hpp"
#include "opshift/ssf/ssf.hpp"
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

BlockOperatorMatrix scalar_block(double a0, double a1, double b)
{
    return {HermitianOperator::diagonal({a0}), HermitianOperator::diagonal({a1}), scalar_matrix(b)};
}

BlockOperatorMatrix henorm_block(Rng& rng, Index n0, Index n1, double fraction)
{
    auto [s0, s1] = separated_spectra(rng, n0, n1, 1.0);
    const auto a0 = random_hermitian_with_spectrum(rng, s0);
    const auto a1 = random_hermitian_with_spectrum(rng, s1);
    const ComplexMatrix b = gaussian_matrix(rng, n0, n1);
    const auto r = hypothesis_report(BlockOperatorMatrix(a0, a1, b));
    const double scale = std::sqrt(fraction * r.d * r.d / 4.0 / (r.b_norm * std::min(r.ec_norm_a0, r.ec_norm_a1)));
    return {a0, a1, scale * b};
}

BlockOperatorMatrix hadl_block(Rng& rng, Index n0, Index n1, double b_norm)
{
    const auto a0 = random_hermitian_with_spectrum(rng, RealVector::LinSpaced(n0, -3.0, -1.0));
    const auto a1 = random_hermitian_with_spectrum(rng, RealVector::LinSpaced(n1, 1.0, 3.0));
    ComplexMatrix b = gaussian_matrix(rng, n0, n1);
    b *= b_norm / operator_norm(b);
    return {a0, a1, b};
}

const double kLowEigen = (1.0 - std::sqrt(1.16)) / 2.0;
const double kHighEigen = (1.0 + std::sqrt(1.16)) / 2.0;

}  // namespace

TEST_CASE("StepFunction: evaluation, merging and arithmetic")
{
    const StepFunction zero;
    CHECK(zero.is_zero());
    CHECK(zero(3.0) == 0);

    const auto f = StepFunction::from_jumps({{0.0, 1}, {1.0, -1}, {2.0, 1}, {3.0, -1}}, 1e-10);
    CHECK(f(-1.0) == 0);
    CHECK(f(0.0) == 1);  // left-closed
    CHECK(f(0.999) == 1);
    CHECK(f(1.0) == 0);
    CHECK(f(2.5) == 1);
    CHECK(f(3.0) == 0);
    REQUIRE(f.support());
    CHECK(f.support()->lo == 0.0);
    CHECK(f.support()->hi == 3.0);

    const auto cancel = StepFunction::from_jumps({{1.0, 1}, {1.0 + 1e-12, -1}}, 1e-10);
    CHECK(cancel.is_zero());

    CHECK(max_difference(subtract(f, f, 1e-10), zero, 1e-10) == 0);
    CHECK(max_difference(add(f, -f, 1e-10), zero, 1e-10) == 0);
    CHECK(max_difference(f, zero, 1e-10) == 1);
    CHECK(equal_modulo_integers(f, f, 1e-10));
    CHECK_FALSE(equal_modulo_integers(f, zero, 1e-10));
    CHECK(f.integrate_derivative([](double x) { return x; }) == doctest::Approx(2.0));
    CHECK_THROWS_AS(StepFunction({1.0, 0.5}, {0, 1, 0}), PreconditionError);
}

TEST_CASE("counting_ssf examples")
{
    const auto a = HermitianOperator::diagonal({0.0});
    const auto h = HermitianOperator::diagonal({1.0});
    CHECK(counting_ssf(a, a).is_zero());
    const auto xi = counting_ssf(h, a);
    CHECK(xi(-0.1) == 0);
    CHECK(xi(0.0) == 1);
    CHECK(xi(0.5) == 1);
    CHECK(xi(1.0) == 0);

    const auto two = counting_ssf(HermitianOperator::diagonal({1.0, 3.0}), HermitianOperator::diagonal({0.0, 2.0}));
    for (double x : {0.0, 0.5, 2.0, 2.9}) {
        CHECK(two(x) == 1);
    }
    for (double x : {-1.0, 1.0, 1.5, 3.0, 4.0}) {
        CHECK(two(x) == 0);
    }
    CHECK_THROWS_AS(counting_ssf(HermitianOperator::diagonal({1.0, 2.0}), a), ShapeError);
}

TEST_CASE("counting_ssf: chain rule and antisymmetry are exact")
{
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = random_hermitian(rng, 6);
        const auto a = random_hermitian(rng, 6);
        const auto m = random_hermitian(rng, 6);
        const double tol = 1e-9;
        const auto direct = counting_ssf(h, a);
        const auto chained = add(counting_ssf(h, m), counting_ssf(m, a), tol);
        CHECK(max_difference(direct, chained, tol) == 0);
        CHECK(max_difference(direct, -counting_ssf(a, h), tol) == 0);
    }
}

TEST_CASE("trace formula")
{
    const auto a = HermitianOperator::diagonal({0.0});
    const auto h = HermitianOperator::diagonal({1.0});
    const auto same = trace_formula_check(a, a, {smooth_bump(0.0, 2.0)});
    CHECK(same.max_residual == 0.0);

    const auto shift = trace_formula_check(h, a, {plateau_identity(-1.0, 2.0, 1.0)});
    CHECK(shift.checks[0].lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(shift.checks[0].exact_sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(shift.max_residual <= 1e-10);

    Rng rng(32);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_hermitian(rng, 5);
        const auto y = random_hermitian(rng, 5);
        const double r = std::max(x.decomposition().spectral_radius(), y.decomposition().spectral_radius());
        std::vector<TestFunction> phis;
        for (int k = 0; k < 5; ++k) {
            phis.push_back(smooth_bump(uniform(rng, -0.5, 0.5), r + uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0)));
        }
        const auto rep = trace_formula_check(x, y, phis);
        CHECK(rep.all_cover);
        worst = std::max(worst, rep.max_residual);
    }
    CHECK(worst <= 1e-6);

    const auto narrow = trace_formula_check(h, a, {smooth_bump(0.5, 0.2)});
    CHECK_FALSE(narrow.all_cover);
}

TEST_CASE("perturbation determinant")
{
    const auto a = HermitianOperator::diagonal({0.0});
    const auto h = HermitianOperator::diagonal({1.0});
    const Complex i(0.0, 1.0);
    CHECK(std::abs(perturbation_determinant(a, a, i) - 1.0) == 0.0);
    CHECK(std::abs(perturbation_determinant(h, a, i) - Complex(1.0, 1.0)) < 1e-15);
    CHECK_THROWS_AS(perturbation_determinant(h, a, Complex(0.5, 0.0)), PreconditionError);

    Rng rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_hermitian(rng, 6);
        const auto y = random_hermitian(rng, 6);
        const Complex z(uniform(rng, -2.0, 2.0), uniform(rng, 0.1, 1.0));
        const Complex eig = perturbation_determinant(x, y, z);
        const Complex dense = perturbation_determinant_dense(x.matrix(), y.matrix(), z);
        CHECK(std::abs(eig - dense) <= 1e-10 * std::max(1.0, std::abs(eig)));
    }
}

TEST_CASE("ssf_via_argument")
{
    const auto a = HermitianOperator::diagonal({0.0});
    const auto h = HermitianOperator::diagonal({1.0});
    CHECK(ssf_via_argument(a, a, 0.5) == 0.0);
    DeterminantTrace trace;
    CHECK(ssf_via_argument(h, a, 0.5, {}, &trace) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(trace.values.size() == trace.argument.size());
    for (std::size_t k = 1; k < trace.argument.size(); ++k) {
        CHECK(std::abs(trace.argument[k] - trace.argument[k - 1]) < std::numbers::pi);
    }
    CHECK_THROWS_AS(ssf_via_argument(h, a, 0.99), PreconditionError);

    Rng rng(34);
    for (int trial = 0; trial < 3; ++trial) {
        const auto x = random_hermitian(rng, 6);
        const auto y = random_hermitian(rng, 6);
        const auto xi = counting_ssf(x, y);
        int tested = 0;
        double worst = 0.0;
        while (tested < 20) {
            const double lambda = uniform(rng, -4.0, 4.0);
            const double dist =
                std::min(distance_to_set(lambda, x.eigenvalues()), distance_to_set(lambda, y.eigenvalues()));
            if (dist < 0.05) {
                continue;
            }
            worst = std::max(worst, std::abs(ssf_via_argument(x, y, lambda) - xi(lambda)));
            ++tested;
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("splitting: scalar example and B = 0")
{
    const auto zero = scalar_block(0.0, 1.0, 0.0);
    const auto z = splitting_check(zero, solve_angular(zero));
    CHECK(z.full.is_zero());
    CHECK(z.xi0.is_zero());
    CHECK(z.xi1.is_zero());

    const auto b = scalar_block(0.0, 1.0, 0.2);
    const auto s = splitting_check(b, solve_angular(b));
    CHECK(s.exact);
    CHECK(s.modulo_integers);
    REQUIRE(s.xi0.support());
    CHECK(s.xi0.support()->lo == doctest::Approx(kLowEigen).epsilon(1e-12));
    CHECK(s.xi0.support()->hi == 0.0);
    CHECK(s.xi0(-0.02) == -1);
    REQUIRE(s.xi1.support());
    CHECK(s.xi1.support()->lo == 1.0);
    CHECK(s.xi1.support()->hi == doctest::Approx(kHighEigen).epsilon(1e-12));
    CHECK(s.xi1(1.02) == 1);  // A1's eigenvalue moves up: N_A1 - N_H1 = +1 on [1, 1.0385)
    CHECK(vanishing_check(b, solve_angular(b), Hypothesis::henorm, spectral_grid(b, 1000)).empty());
}

TEST_CASE("splitting: random HEnorm instances")
{
    Rng rng(35);
    for (int trial = 0; trial < 50; ++trial) {
        const auto b = henorm_block(rng, 3, 4, uniform(rng, 0.1, 0.9));
        const auto q = solve_angular(b);
        const auto s = splitting_check(b, q);
        CHECK(s.exact);
        CHECK(s.riccati_residual <= 1e-10);
        CHECK(vanishing_check(b, q, Hypothesis::henorm, spectral_grid(b, 500)).empty());
    }
}

TEST_CASE("vanishing regions under HAdL and HBpi")
{
    Rng rng(36);
    for (int trial = 0; trial < 5; ++trial) {
        const auto b = hadl_block(rng, 4, 3, 3.0);
        const auto q = solve_angular(b);
        CHECK(splitting_check(b, q).exact);
        CHECK(vanishing_check(b, q, Hypothesis::hadl, spectral_grid(b, 10000)).empty());
    }
    for (int trial = 0; trial < 3; ++trial) {
        auto [s0, s1] = separated_spectra(rng, 3, 3, 1.0);
        const auto a0 = random_hermitian_with_spectrum(rng, s0);
        const auto a1 = random_hermitian_with_spectrum(rng, s1);
        ComplexMatrix bm = gaussian_matrix(rng, 3, 3);
        bm *= 0.9 * spec_distance(a0, a1) / std::numbers::pi / operator_norm(bm);
        const BlockOperatorMatrix b(a0, a1, bm);
        const auto q = solve_angular(b, AngularMethod::fourier);
        CHECK(vanishing_check(b, q, Hypothesis::hbpi, spectral_grid(b, 2000)).empty());
    }
}

TEST_CASE("similarity stability and determinant identity")
{
    Rng rng(37);
    for (int trial = 0; trial < 5; ++trial) {
        const auto b = henorm_block(rng, 3, 3, 0.7);
        const auto q = solve_angular(b);
        const auto sim = similarity_diagonalize(b, q);
        const ComplexMatrix t = sim.v.partialPivLu().solve(b.h().matrix() * sim.v);
        // the similar operator's self-adjoint representative has the same spectrum as H
        const auto rep = HermitianOperator::symmetrized(unitary_diagonalize(b, q).u.adjoint() * b.h().matrix() *
                                                        unitary_diagonalize(b, q).u);
        const double tol = 1e-9;
        CHECK(max_difference(counting_ssf(rep, b.diagonal_part()), counting_ssf(b.h(), b.diagonal_part()), tol) == 0);

        Eigen::ComplexEigenSolver<ComplexMatrix> es(t, false);
        ComplexVector eta = es.eigenvalues();
        std::sort(eta.data(), eta.data() + eta.size(), [](Complex x, Complex y) { return x.real() < y.real(); });
        const ComplexVector alpha = b.h().eigenvalues().cast<Complex>();
        for (int k = 0; k < 5; ++k) {
            const Complex z(uniform(rng, -3.0, 3.0), uniform(rng, 0.1, 2.0));
            CHECK(std::abs(perturbation_determinant(eta, alpha, z) - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("homotopy: xi vanishes in a common spectral gap")
{
    Rng rng(38);
    const auto b = henorm_block(rng, 3, 3, 0.8);
    const auto r = hypothesis_report(b);
    // midpoint between the channels is at distance d/2 from both spectra
    const double mid = 0.5 * (b.a0().max_eigenvalue() + b.a1().min_eigenvalue());
    REQUIRE(distance_to_set(mid, b.a0().eigenvalues()) >= r.d / 2.0 - 1e-12);
    for (int k = 0; k <= 10; ++k) {
        const auto bt = b.scaled(k / 10.0);
        const double dist = distance_to_set(mid, bt.h().eigenvalues());
        REQUIRE(dist > 0.0);
        CHECK(counting_ssf(bt.h(), bt.diagonal_part())(mid) == 0);
    }
}
