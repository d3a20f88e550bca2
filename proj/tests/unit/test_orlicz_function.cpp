#include <doctest.h>

#include <cmath>
#include <random>

#include "orlicz/errors.hpp"
#include "orlicz/orlicz_function.hpp"

using namespace orlicz;

namespace {

// Plain bisection, independent of the library's bracket logic.
double bisect(const OrliczFunction& phi, double target, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (phi(mid) > target ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// Brute-force sup of x*y - phi(x) on a fine grid, refined once around the best node.
double grid_conjugate(const OrliczFunction& phi, double y, double x_max) {
    double best = 0.0, arg = 0.0;
    const int n = 200000;
    for (int i = 0; i <= n; ++i) {
        const double x = x_max * i / n;
        const double v = x * y - phi(x);
        if (v > best) best = v, arg = x;
    }
    const double h = x_max / n;
    for (int i = -1000; i <= 1000; ++i) {
        const double x = arg + h * i / 1000.0;
        if (x >= 0.0) best = std::max(best, x * y - phi(x));
    }
    return best;
}

std::vector<OrliczFunction> all_families() {
    return {OrliczFunction::power(2.0), OrliczFunction::power(1.5, 2.0), OrliczFunction::power(3.0, 0.5),
            OrliczFunction::exp_minus(), OrliczFunction::power_log(1.0), OrliczFunction::power_log(2.0),
            OrliczFunction::tabulated({{0, 0}, {1, 0.5}, {2, 2}, {4, 8}})};
}

}  // namespace

TEST_SUITE("orlicz_function") {
    TEST_CASE("evaluation") {
        CHECK(OrliczFunction::power(2.0)(3.0) == 9.0);
        CHECK(OrliczFunction::exp_minus()(1.0) == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-15));
        // Series branch near zero keeps full relative accuracy.
        CHECK(OrliczFunction::exp_minus()(1e-8) == doctest::Approx(5e-17).epsilon(1e-12));
        CHECK(OrliczFunction::power_log(2.0)(3.0) == doctest::Approx(9.0 * std::log(4.0)));
        const auto tab = OrliczFunction::tabulated({{0, 0}, {1, 0.5}, {2, 2}});
        CHECK(tab(1.5) == doctest::Approx(1.25));
        CHECK(tab(3.0) == doctest::Approx(3.5));
        for (const auto& phi : all_families()) CHECK(phi(0.0) == 0.0);
        CHECK_THROWS_AS((void)OrliczFunction::power(2.0)(-1.0), DomainError);
    }

    TEST_CASE("validation rejects non-Young input") {
        CHECK_THROWS_AS(OrliczFunction::power(1.0), DomainError);
        CHECK_THROWS_AS(OrliczFunction::power(2.0, -1.0), DomainError);
        CHECK_THROWS_AS(OrliczFunction::tabulated({{0, 0}, {1, 2}, {2, 3}}), DomainError);  // concave kink
        CHECK_THROWS_AS(OrliczFunction::tabulated({{0, 1}, {1, 2}}), DomainError);
        CHECK_THROWS_AS(OrliczFunction::tabulated({{0, 0}, {2, 1}, {1, 3}}), DomainError);
    }

    TEST_CASE("right inverse") {
        CHECK(right_inverse(OrliczFunction::power(2.0), 4.0) == 2.0);
        for (const auto& phi : all_families()) CHECK(right_inverse(phi, 0.0) == 0.0);
        const auto e = OrliczFunction::exp_minus();
        const double s = right_inverse(e, 1.0);
        CHECK(s == doctest::Approx(bisect(e, 1.0, 0.0, 4.0)).epsilon(1e-12));
        CHECK(std::abs(e(s) - 1.0) < 1e-10);

        for (const auto& phi : all_families())
            for (int k = -12; k <= 12; ++k) {
                const double x = std::pow(10.0, k / 4.0);
                // e^x overflows doubles past x ~ 709; there is nothing to invert.
                if (!std::isfinite(phi(x))) continue;
                CHECK(right_inverse(phi, phi(x)) == doctest::Approx(x).epsilon(1e-8));
            }
    }

    TEST_CASE("conjugates") {
        // x^2/2 is self-conjugate.
        const auto half = OrliczFunction::power(2.0, 0.5);
        CHECK(conjugate(half)(3.0) == doctest::Approx(4.5).epsilon(1e-14));
        CHECK(conjugate_value(half, 3.0) == doctest::Approx(4.5).epsilon(1e-12));

        const auto sq = OrliczFunction::power(2.0);
        CHECK(conjugate(sq)(2.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(conjugate_value(sq, 2.0) == doctest::Approx(grid_conjugate(sq, 2.0, 4.0)).epsilon(1e-8));
        for (const auto& phi : all_families()) CHECK(conjugate_value(phi, 0.0) == 0.0);

        for (double p : {1.25, 1.5, 2.0, 3.0, 4.5}) {
            const double q = conjugate_exponent(p);
            CHECK(std::abs(1.0 / p + 1.0 / q - 1.0) < 1e-12);
            const auto psi = conjugate(OrliczFunction::power(p, 1.0 / p));
            const auto back = conjugate(psi);
            for (int i = 0; i <= 100; ++i) {
                const double x = 0.1 * i;
                CHECK(psi(x) == doctest::Approx(std::pow(x, q) / q).epsilon(1e-12));
                CHECK(std::abs(back(x) - std::pow(x, p) / p) < 1e-5);
            }
        }

        // Numeric conjugates of the non-power families against the grid oracle.
        for (const auto& phi : {OrliczFunction::exp_minus(), OrliczFunction::power_log(2.0)})
            for (double y : {0.5, 1.0, 3.0, 7.0})
                CHECK(conjugate_value(phi, y) == doctest::Approx(grid_conjugate(phi, y, 10.0)).epsilon(1e-8));

        CHECK_THROWS_AS(conjugate(OrliczFunction::tabulated({{0, 0}, {1, 1}, {2, 3}})), DomainError);
        CHECK_THROWS_AS((void)conjugate_value(OrliczFunction::tabulated({{0, 0}, {1, 1}, {2, 3}}), 5.0),
                        UnboundedConjugateError);
    }

    TEST_CASE("conjugate of slowly growing phi needs a wide bracket") {
        // x ln(1+x): the maximizer solves ln(1+x) + x/(1+x) = y and grows like e^y.
        const auto phi = OrliczFunction::power_log(1.0);
        for (double y : {5.0, 21.5, 40.0, 100.0}) {
            double lo = 0.0, hi = 300.0;  // bisection on t = ln(1 + x)
            for (int i = 0; i < 200; ++i) {
                const double t = 0.5 * (lo + hi);
                const double x = std::expm1(t);
                (t + x / (1.0 + x) < y ? lo : hi) = t;
            }
            const double x = std::expm1(lo);
            const double expect = x * y - phi(x);
            CHECK(conjugate_value(phi, y) == doctest::Approx(expect).epsilon(1e-9));
        }
        CHECK_NOTHROW(conjugate(phi));
    }

    TEST_CASE("Young's inequality on random pairs") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 50.0);
        for (const auto& phi : {OrliczFunction::power(2.0), OrliczFunction::power(1.5, 2.0), OrliczFunction::power_log(2.0)}) {
            const ConjugateOptions wide{1e9, 60.0, 1024};
            const auto psi = conjugate(phi, wide);
            for (int i = 0; i < 2000; ++i) {
                const double x = u(rng), y = u(rng);
                CHECK(x * y <= phi(x) + psi(y) + 1e-9 * (1.0 + x * y));
            }
        }
    }

    TEST_CASE("delta2") {
        const auto r3 = check_delta2(OrliczFunction::power(3.0));
        CHECK(r3.holds);
        CHECK(std::abs(r3.k_estimate - 8.0) < 1e-6);
        const auto r15 = check_delta2(OrliczFunction::power(1.5, 2.0));
        CHECK(r15.holds);
        CHECK(std::abs(r15.k_estimate - std::pow(2.0, 1.5)) < 1e-6);
        const auto e = check_delta2(OrliczFunction::exp_minus());
        CHECK_FALSE(e.holds);
        REQUIRE(e.counterexample_x.has_value());
        CHECK(*e.counterexample_x > 1.0);
        CHECK(check_delta2(OrliczFunction::power_log(2.0)).holds);
        CHECK(check_delta2(OrliczFunction::power_log(2.0)).k_estimate <= 8.0 + 1e-9);
        CHECK(OrliczFunction::power(3.0).delta2() == Delta2Status::holds);
        CHECK(OrliczFunction::exp_minus().delta2() == Delta2Status::fails);
        CHECK(satisfies_delta2(OrliczFunction::tabulated({{0, 0}, {1, 1}, {2, 3}})));
    }

    TEST_CASE("superlinear growth") {
        CHECK(check_superlinear(OrliczFunction::power(2.0)));
        CHECK(check_superlinear(OrliczFunction::exp_minus()));
        // x (1 + 1e-9 x) is practically linear up to 1e8.
        std::vector<std::pair<double, double>> knots{{0, 0}};
        for (int k = -3; k <= 9; ++k) {
            const double x = std::pow(10.0, k);
            knots.emplace_back(x, x * (1.0 + 1e-9 * x));
        }
        CHECK_FALSE(check_superlinear(OrliczFunction::tabulated(knots)));
    }
}
