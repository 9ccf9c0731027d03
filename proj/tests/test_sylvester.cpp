#include <doctest.h>

#include <cmath>
#include <numbers>

#include "opshift/core/functions.hpp"
#include "opshift/core/norms.hpp"
#include "opshift/sylvester/solvers.hpp"
#include "test_helpers.hpp"

using namespace opshift;
using opshift::testing::rel_frobenius;
using opshift::testing::separated_spectra;

namespace {

SylvesterProblem scalar(double a, double c, double y)
{
    ComplexMatrix ym(1, 1);
    ym(0, 0) = y;
    return {HermitianOperator::diagonal({a}), HermitianOperator::diagonal({c}), ym};
}

SylvesterProblem random_problem(Rng& rng, Index m, Index n, double gap)
{
    auto [a, c] = separated_spectra(rng, n, m, gap);
    auto ah = random_hermitian_with_spectrum(rng, a);
    auto ch = random_hermitian_with_spectrum(rng, c);
    return {ah, ch, gaussian_matrix(rng, m, n)};
}

SylvesterProblem ordered_problem(Rng& rng, Index m, Index n, double gap)
{
    RealVector c = opshift::testing::sorted_uniform(rng, m, -2.0, 0.0);
    RealVector a = opshift::testing::sorted_uniform(rng, n, 0.0, 2.0);
    a.array() += c.maxCoeff() + gap - a.minCoeff();
    return {random_hermitian_with_spectrum(rng, a), random_hermitian_with_spectrum(rng, c),
            gaussian_matrix(rng, m, n)};
}

}  // namespace

TEST_CASE("oracle: closed-form examples")
{
    CHECK(std::abs(solve_oracle(scalar(2.0, 0.0, 1.0))(0, 0) - 0.5) < 1e-15);
    CHECK(solve_oracle(scalar(2.0, 0.0, 0.0)).norm() == 0.0);

    ComplexMatrix y(1, 2);
    y << 1.0, 1.0;
    const SylvesterProblem p(HermitianOperator::diagonal({1.0, 3.0}), HermitianOperator::diagonal({0.0}), y);
    const ComplexMatrix x = solve_oracle(p);
    CHECK(std::abs(x(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(x(0, 1) - 1.0 / 3.0) < 1e-15);

    CHECK_THROWS_AS(solve_oracle(scalar(1.0, 1.0, 1.0)), SingularityError);
}

TEST_CASE("oracle: residual on random problems")
{
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_problem(rng, 3 + trial % 5, 2 + trial % 7, 0.3);
        const ComplexMatrix x = solve_oracle(p);
        CHECK(sylvester_residual(p, x) <= 1e-10 * (1.0 + p.y().norm()));
    }
}

TEST_CASE("stieltjes: primal, dual and duality")
{
    const auto s = scalar(2.0, 0.0, 1.0);
    CHECK(std::abs(solve_stieltjes(s)(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(solve_stieltjes(s, true)(0, 0) + 0.5) < 1e-15);
    CHECK(solve_stieltjes(scalar(2.0, 0.0, 0.0)).norm() == 0.0);
    CHECK_THROWS_AS(solve_stieltjes(scalar(1.0, 1.0, 1.0)), PreconditionError);

    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_problem(rng, 6, 4, 0.5);
        const ComplexMatrix x = solve_stieltjes(p);
        const ComplexMatrix z = solve_stieltjes(p, true);
        CHECK(rel_frobenius(x, solve_oracle(p)) <= 1e-10);
        CHECK((z + x.adjoint()).norm() <= 1e-12 * (1.0 + x.norm()));
        // Z solves the dual equation ZC - AZ = Y^*
        CHECK((z * p.c().matrix() - p.a().matrix() * z - p.y().adjoint()).norm() <= 1e-10 * (1.0 + p.y().norm()));
    }
}

TEST_CASE("stieltjes handles repeated eigenvalues of C")
{
    Rng rng(8);
    RealVector c(4);
    c << -1.0, -1.0, 0.5, 0.5;
    RealVector a(3);
    a << -2.0, 1.5, 3.0;
    const SylvesterProblem p(random_hermitian_with_spectrum(rng, a), random_hermitian_with_spectrum(rng, c),
                             gaussian_matrix(rng, 4, 3));
    CHECK(p.c().decomposition().clusters().size() == 2);
    CHECK(rel_frobenius(solve_stieltjes(p), solve_oracle(p)) <= 1e-10);
    CHECK(rel_frobenius(solve_double_stieltjes(p), solve_oracle(p)) <= 1e-10);
    CHECK(rel_frobenius(solve_contour(p), solve_oracle(p)) <= 1e-8);
}

TEST_CASE("double stieltjes equals stieltjes")
{
    CHECK(std::abs(solve_double_stieltjes(scalar(2.0, 0.0, 1.0))(0, 0) - 0.5) < 1e-15);
    CHECK(solve_double_stieltjes(scalar(2.0, 0.0, 0.0)).norm() == 0.0);
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_problem(rng, 5, 7, 0.4);
        CHECK(rel_frobenius(solve_double_stieltjes(p), solve_stieltjes(p)) <= 1e-12);
    }
}

TEST_CASE("contour: scalar residue and random problems")
{
    const auto s = scalar(2.0, 0.0, 1.0);
    ContourSpec unit;
    unit.circles.push_back({0.0, 1.0});
    CHECK(std::abs(solve_contour(s, unit)(0, 0) - 0.5) < 1e-12);
    CHECK(solve_contour(scalar(2.0, 0.0, 0.0), unit).norm() == 0.0);

    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = random_problem(rng, 4, 5, 0.3);
        CHECK(rel_frobenius(solve_contour(p), solve_oracle(p)) <= 1e-8);
    }

    // one large circle around spec C when spec A lies entirely outside
    const auto q = ordered_problem(rng, 3, 3, 1.0);
    ContourSpec big;
    const double lo = q.c().min_eigenvalue();
    const double hi = q.c().max_eigenvalue();
    big.circles.push_back({0.5 * (lo + hi), 0.5 * (hi - lo) + 0.5});
    CHECK(rel_frobenius(solve_contour(q, big), solve_oracle(q)) <= 1e-8);
}

TEST_CASE("contour: winding check rejects bad contours")
{
    const auto s = scalar(2.0, 0.0, 1.0);
    ContourSpec covers_a;
    covers_a.circles.push_back({1.0, 1.5});
    CHECK(winding_number(covers_a, 2.0, 512) == doctest::Approx(1.0));
    CHECK_THROWS_AS(solve_contour(s, covers_a), PreconditionError);

    ContourSpec misses_c;
    misses_c.circles.push_back({5.0, 1.0});
    CHECK(winding_number(misses_c, 0.0, 512) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(solve_contour(s, misses_c), PreconditionError);

    ContourSpec never_converges;
    never_converges.circles.push_back({0.0, 1.9});
    never_converges.max_nodes = 64;
    never_converges.tolerance = 1e-16;
    CHECK_THROWS_AS(solve_contour(s, never_converges), ConvergenceError);
}

TEST_CASE("exponential: scalar integral and ordered spectra")
{
    CHECK(std::abs(solve_exponential(scalar(1.0, 0.0, 1.0))(0, 0) - 1.0) < 1e-12);
    CHECK(solve_exponential(scalar(1.0, 0.0, 0.0)).norm() == 0.0);

    Rng rng(2);
    const SylvesterProblem p(HermitianOperator::diagonal({2.0, 3.0}), HermitianOperator::diagonal({0.0, 1.0}),
                             gaussian_matrix(rng, 2, 2));
    const ComplexMatrix x = solve_exponential(p);
    CHECK(rel_frobenius(x, solve_oracle(p)) <= 1e-8);
    CHECK(operator_norm(x) <= operator_norm(p.y()) / p.gap() + 1e-12);

    for (int trial = 0; trial < 5; ++trial) {
        const auto q = ordered_problem(rng, 6, 4, 0.1 + trial);
        CHECK(rel_frobenius(solve_exponential(q), solve_oracle(q)) <= 1e-8);
    }
    CHECK_THROWS_AS(solve_exponential(scalar(0.0, 1.0, 1.0)), PreconditionError);
}

TEST_CASE("fourier kernel: transform property and closed form")
{
    for (double d : {0.1, 1.0, 4.0}) {
        const FourierKernel k(d, 12.0 * d);
        CHECK(k.valid());
        CHECK(k.transform_error() <= 1e-9);
        CHECK(k.transfer(-2.0 * d) == doctest::Approx(-1.0 / (2.0 * d)).epsilon(1e-10));
        // inside the gap the quadrature reproduces the smoothed transform
        for (double w : {0.2, 0.45, 0.55, 0.9}) {
            CHECK(k.transfer(w * d) == doctest::Approx(FourierKernel::base_transform(w) / d).epsilon(1e-9));
        }
    }
    // the profile is phi at the scaled node: 1/2 near the origin, Gaussian decay
    const FourierKernel k(1.0, 5.0);
    CHECK(k.profile().front() == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(std::abs(k.profile().back()) < 1e-11);
    CHECK(std::abs(k.sample(0).real()) == 0.0);

    const FourierKernel truncated(1.0, 5.0, 1e-6, 5.0);
    CHECK_FALSE(truncated.valid());
}

TEST_CASE("fourier: scalar divided difference and random problems")
{
    CHECK(solve_fourier(scalar(0.5, -0.5, 0.0)).norm() == 0.0);
    CHECK(std::abs(solve_fourier(scalar(0.5, -0.5, 1.0))(0, 0) - 1.0) <= 1e-6);

    Rng rng(55);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = random_problem(rng, 5, 5, 1.0);
        const ComplexMatrix x = solve_fourier(p);
        CHECK(rel_frobenius(x, solve_oracle(p)) <= 1e-6);
        CHECK(bound_margins(p, x).operator_norm >= -1e-9);
    }

    const auto p = random_problem(rng, 3, 3, 0.5);
    CHECK_THROWS_AS(solve_fourier(p, FourierKernel(2.0 * p.gap(), 20.0)), PreconditionError);
    CHECK_THROWS_AS(solve_fourier(p, FourierKernel(p.gap(), p.gap())), PreconditionError);
    CHECK_THROWS_AS(solve_fourier(p, FourierKernel(p.gap(), 20.0, 1e-6, 5.0)), PreconditionError);
}

TEST_CASE("fourier: eigenbasis evaluation equals the literal time-domain sum")
{
    Rng rng(77);
    const auto p = random_problem(rng, 2, 2, 1.0);
    const FourierKernel k = kernel_for(p);
    ComplexMatrix literal = ComplexMatrix::Zero(2, 2);
    for (std::size_t j = 0; j < k.times().size(); ++j) {
        const double t = k.times()[j];
        const Complex f = k.sample(static_cast<Index>(j));
        // nodes at +t and -t; f_d is odd
        for (double s : {t, -t}) {
            const ComplexMatrix left = apply_function(p.c(), [&](double x) { return std::exp(Complex(0.0, x * s)); });
            const ComplexMatrix right = apply_function(p.a(), [&](double x) { return std::exp(Complex(0.0, -x * s)); });
            literal += k.weights()[j] * (s > 0 ? f : -f) * left * p.y() * right;
        }
    }
    CHECK(rel_frobenius(literal, solve_fourier(p, k)) <= 1e-10);
}

TEST_CASE("bounds: Hilbert-Schmidt witness is sharp, others hold")
{
    for (double d : {0.1, 1.0, 3.0}) {
        const auto w = scalar(d / 2.0, -d / 2.0, 1.0);
        const ComplexMatrix x = solve_oracle(w);
        CHECK(std::abs(x.norm() - 1.0 / d) <= 1e-12 * (1.0 / d));
        CHECK(std::abs(bound_margins(w, x).hilbert_schmidt) <= 1e-12 / d);
    }
    Rng rng(90);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = random_problem(rng, 1 + trial % 6, 1 + trial % 4, 0.2 + 0.1 * trial);
        const BoundMargins m = bound_margins(p, solve_oracle(p));
        CHECK(m.operator_norm >= -1e-9);
        CHECK(m.hilbert_schmidt >= -1e-9);
        CHECK(m.ec_norm >= -1e-9);
    }
}

TEST_CASE("run_solver reports every method")
{
    Rng rng(3);
    const auto p = ordered_problem(rng, 4, 3, 0.7);
    const ComplexMatrix oracle = solve_oracle(p);
    for (auto m : {SylvesterMethod::stieltjes, SylvesterMethod::stieltjes_dual, SylvesterMethod::double_stieltjes,
                   SylvesterMethod::contour, SylvesterMethod::exponential, SylvesterMethod::fourier}) {
        REQUIRE(applicable(p, m));
        const SolverReport r = run_solver(p, m, oracle);
        CHECK(r.method == method_name(m));
        CHECK(r.oracle_deviation <= 1e-6);
        CHECK(r.residual <= 1e-5 * (1.0 + p.y().norm()));
        CHECK(r.seconds >= 0.0);
    }
    CHECK_FALSE(applicable(scalar(0.0, 1.0, 1.0), SylvesterMethod::exponential));
    CHECK(applicable(scalar(0.0, 1.0, 1.0), SylvesterMethod::fourier));
}
