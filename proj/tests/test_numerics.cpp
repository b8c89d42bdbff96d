#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "phasecov/dynamics.hpp"
#include "phasecov/error.hpp"
#include "phasecov/named_function.hpp"
#include "phasecov/polynomial.hpp"
#include "phasecov/quadrature.hpp"
#include "phasecov/rational.hpp"

using namespace phasecov;
using doctest::Approx;

TEST_CASE("adaptive quadrature") {
    CHECK(std::abs(integrate([](double x) { return std::exp(-x); }, 0, 3).value - (1 - std::exp(-3.0))) < 1e-13);
    CHECK(std::abs(integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi).value - 2.0) < 1e-13);
    CHECK(std::abs(integrate([](double x) { return std::sqrt(x); }, 0, 1).value - 2.0 / 3.0) < 1e-10);
    CHECK(integrate([](double) { return 1.0; }, 2, 2).value == 0.0);
    CHECK(std::abs(integrate([](double x) { return x; }, 1, 0).value + 0.5) < 1e-14);
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0, 1), QuadratureFailure);
    CHECK_THROWS_AS(integrate([](double) { return NAN; }, 0, 1), QuadratureFailure);
}

TEST_CASE("cumulative integral") {
    const CumulativeIntegral big_f([](double t) { return std::cos(3 * t); });
    for (double t : {0.0, 0.05, 0.125, 1.0, 7.3, 2.2}) {
        CHECK(std::abs(big_f(t) - std::sin(3 * t) / 3) < 1e-12);
    }
    CHECK_THROWS_AS(big_f(-1.0), DomainError);
}

TEST_CASE("finite differences") {
    const TimeFunction f = [](double t) { return std::sin(2 * t) + t * t * t; };
    const auto df = [](double t) { return 2 * std::cos(2 * t) + 3 * t * t; };
    for (double t : {0.0, 1e-7, 0.3, 2.0, 50.0}) CHECK(std::abs(differentiate(f, t) - df(t)) < 1e-6 * std::max(1.0, std::abs(df(t))));
}

TEST_CASE("polynomial arithmetic") {
    const Polynomial p({1, 2, 3});  // 1 + 2s + 3s²
    const Polynomial q({-1, 1});    // s − 1
    CHECK(p.degree() == 2);
    CHECK(Polynomial({1, 0, 0}).degree() == 0);
    CHECK(Polynomial().degree() == -1);
    CHECK(p(2.0) == 17.0);
    CHECK(p.abs_bound(-2.0) == 17.0);
    CHECK((p * q).coefficients() == std::vector<double>{-1, -1, -1, 3});
    CHECK((p - p).is_zero());
    CHECK(p.derivative().coefficients() == std::vector<double>{2, 6});
    CHECK(q.pow(3).coefficients() == std::vector<double>{-1, 3, -3, 1});

    const auto [quot, rem] = (p * q + Polynomial({4})).divmod(q);
    CHECK(quot == p);
    CHECK(rem.coefficients() == std::vector<double>{4});

    const auto roots = Polynomial({6, -5, 1}).roots();  // (s−2)(s−3)
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].real() == Approx(2.0));
    CHECK(roots[1].real() == Approx(3.0));
}

TEST_CASE("polynomial gcd") {
    const Polynomial a = Polynomial({1, 1}) * Polynomial({2, 1}) * Polynomial({-3, 1});
    const Polynomial b = Polynomial({1, 1}) * Polynomial({-3, 1}) * Polynomial({5, 0, 1});
    const Polynomial g = gcd(a, b);
    REQUIRE(g.degree() == 2);
    const Polynomial expected = Polynomial({1, 1}) * Polynomial({-3, 1});
    for (std::size_t i = 0; i < 3; ++i) CHECK(g.coefficients()[i] == Approx(expected.coefficients()[i]));
    CHECK(gcd(Polynomial({1, 1}), Polynomial({2, 1})).degree() == 0);
    CHECK(gcd(Polynomial({0, 2}), Polynomial()).coefficients() == std::vector<double>{0, 1});
}

TEST_CASE("rational functions") {
    const RationalLaplace f({1}, {1, 1});
    CHECK(f(1.0) == Approx(0.5));
    CHECK_THROWS_AS(RationalLaplace({1}, {0, 0}), ValidationError);
    CHECK_THROWS_AS(f / RationalLaplace(), DegenerateKernel);

    SUBCASE("reduction cancels common factors and keeps values") {
        const Polynomial common({2, 1});
        const RationalLaplace g(Polynomial({3, 1}) * common, Polynomial({1, 0, 1}) * common);
        CHECK(g.numerator().degree() == 1);
        CHECK(g.denominator().degree() == 2);
        CHECK(g.denominator().leading() == 1.0);
        for (double s : {0.1, 1.0, 4.0}) CHECK(std::abs(g(s) - (s + 3) / (s * s + 1)) < 1e-12);
    }
    SUBCASE("sum, product and the zero function") {
        const RationalLaplace g = f - f;
        CHECK(g.is_zero());
        const RationalLaplace h = f * RationalLaplace({1, 1}, {1});
        CHECK(h.numerator().degree() == 0);
        CHECK(h.denominator().degree() == 0);
        CHECK(h(7.0) == Approx(1.0));
    }
    SUBCASE("derivatives") {
        const RationalLaplace d = rational_derivative(f, 1);
        for (double s : {0.5, 2.0}) CHECK(d(s) == Approx(-1.0 / ((s + 1) * (s + 1))));
        CHECK(rational_derivative(f, 0)(3.0) == f(3.0));
        const RationalLaplace g({1}, {1, 0, 1});
        const double h = 1e-3;
        const double fd = (g(1 + h) - 2 * g(1) + g(1 - h)) / (h * h);
        CHECK(std::abs(rational_derivative(g, 2)(1.0) - fd) < 1e-6);
    }
    SUBCASE("derivatives against finite differences on random rationals") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(0.2, 2.0);
        for (int i = 0; i < 200; ++i) {
            const RationalLaplace g(Polynomial({u(rng), u(rng)}), Polynomial({u(rng), 1}) * Polynomial({u(rng), 1}));
            const double s = u(rng);
            const double h = 1e-4;
            const double fd = (g(s - 2 * h) - 8 * g(s - h) + 8 * g(s + h) - g(s + 2 * h)) / (12 * h);
            CHECK(std::abs(rational_derivative(g, 1)(s) - fd) < 1e-6);
            const double fd2 = (-g(s - 2 * h) + 16 * g(s - h) - 30 * g(s) + 16 * g(s + h) - g(s + 2 * h)) / (12 * h * h);
            CHECK(std::abs(rational_derivative(g, 2)(s) - fd2) < 1e-6);
        }
    }
    SUBCASE("positive real poles") {
        const RationalLaplace g(Polynomial({1}), Polynomial({-2, 1}) * Polynomial({3, 1}));
        const auto poles = g.positive_real_poles();
        REQUIRE(poles.size() == 1);
        CHECK(poles[0] == Approx(2.0));
    }
}

TEST_CASE("partial fractions and inverse transform") {
    const RationalLaplace f({0.2}, {0, 1, 1});  // 0.2/(s(s+1))
    const auto terms = partial_fractions(f);
    REQUIRE(terms.size() == 2);
    for (double t : {0.0, 0.5, 3.0}) {
        CHECK(std::abs(inverse_laplace(terms, t) - 0.2 * (1 - std::exp(-t))) < 1e-14);
        CHECK(std::abs(inverse_laplace_derivative(terms, t) - 0.2 * std::exp(-t)) < 1e-14);
    }
    CHECK(partial_fractions(RationalLaplace()).empty());
    CHECK_THROWS_AS(partial_fractions(RationalLaplace({1}, {1, 0, 1})), UnsupportedInversion);
    CHECK_THROWS_AS(partial_fractions(RationalLaplace({1}, {1, 2, 1})), UnsupportedInversion);
    CHECK_THROWS_AS(partial_fractions(RationalLaplace({1, 1}, {1})), UnsupportedInversion);
}

TEST_CASE("named functions") {
    const NamedFunction f = NamedFunction::exp_decay(2, 2) + NamedFunction::exp_decay(-1, 1) +
                            NamedFunction::cosine(0.5, 3) + NamedFunction::constant(0.25);
    for (double t : {0.0, 0.7, 2.5}) {
        const double v = 2 * std::exp(-2 * t) - std::exp(-t) + 0.5 * std::cos(3 * t) + 0.25;
        const double d = -4 * std::exp(-2 * t) + std::exp(-t) - 1.5 * std::sin(3 * t);
        CHECK(f(t) == Approx(v));
        CHECK(f.derivative(t) == Approx(d));
    }
    const RationalLaplace lf = f.laplace();
    for (double s : {0.5, 1.5, 10.0}) {
        const double expected = 2 / (s + 2) - 1 / (s + 1) + 0.5 * s / (s * s + 9) + 0.25 / s;
        CHECK(lf(s) == Approx(expected).epsilon(1e-12));
        // Independent check of the transform by quadrature.
        const double numeric = integrate([&](double t) { return f(t) * std::exp(-s * t); }, 0, 80.0 / s).value;
        CHECK(std::abs(numeric - expected) < 1e-8);
    }
    CHECK_THROWS_AS(term_kind_from_string("sine"), ValidationError);
}

TEST_CASE("sampled functions") {
    std::vector<double> t, y;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(0.05 * i);
        y.push_back(std::sin(t.back()));
    }
    const SampledFunction f(t, y);
    for (double x : {0.0, 0.33, 5.0, 9.99, 10.0}) {
        // Natural end conditions force S'' = 0 where sin'' is not, so the
        // error grows to O(h²) within a few knots of the ends.
        CHECK(std::abs(f(x) - std::sin(x)) < (x > 0.2 && x < 9.8 ? 1e-5 : 1e-4));
        if (x > 0.2 && x < 9.8) CHECK(std::abs(f.derivative(x) - std::cos(x)) < 1e-4);
    }
    CHECK_THROWS_AS(f(10.5), DomainError);
    CHECK_THROWS_AS(SampledFunction({0, 0}, {1, 2}), ValidationError);
    CHECK_THROWS_AS(SampledFunction({0}, {1}), ValidationError);
}
