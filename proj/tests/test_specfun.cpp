#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracle_values.hpp"
#include "oscspec/specfun.hpp"

using namespace oscspec;

namespace {

// Explicit-sum Hermite function, long double; independent of the library recurrence.
long double hermite_function_sum(int n, long double x) {
    long double h = 0.0L;
    for (int m = 0; 2 * m <= n; ++m) {
        const long double term = std::pow(-1.0L, m) * std::pow(2.0L * x, n - 2 * m) / (std::tgamma(m + 1.0L) * std::tgamma(n - 2 * m + 1.0L));
        h += term;
    }
    h *= std::tgamma(n + 1.0L);
    const long double norm = std::sqrt(std::pow(2.0L, n) * std::tgamma(n + 1.0L) * std::sqrt(std::numbers::pi_v<long double>));
    return h * std::exp(-x * x / 2.0L) / norm;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("binomial coefficients of (1-z)^{-1/2}") {
    CHECK(binom_E(0) == 1.0);
    CHECK(binom_E(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(binom_E(2) == doctest::Approx(0.375).epsilon(1e-15));
    for (int k : {50, 100, 400, 1000}) CHECK(std::abs(binom_E(k) * std::sqrt(std::numbers::pi * k) - 1.0) < 0.01);
    const auto E = binom_E_table(4000);
    for (double x : {0.1, 0.5, 0.9}) {
        double s = 0.0, p = 1.0;
        for (double e : E) {
            s += e * p;
            p *= x;
        }
        CHECK(std::abs(s - 1.0 / std::sqrt(1.0 - x)) < 1e-10);
    }
}

TEST_CASE("closed-form nu^0 matches the factorial formula") {
    CHECK(nu0(0) == doctest::Approx(std::log(4.0 / std::sqrt(std::numbers::pi))).epsilon(1e-14));
    CHECK(nu0(1) == doctest::Approx(std::log(6.0 / std::sqrt(std::numbers::pi))).epsilon(1e-14));
    for (const auto& o : oracle::nu0) CHECK(std::abs(nu0(o.n) - o.value) < 1e-12);
}

TEST_CASE("Hermite functions") {
    CHECK(psi0(0, 0.0).value == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-15));
    CHECK(psi0(1, 0.0).deriv == doctest::Approx(std::sqrt(2.0) * std::pow(std::numbers::pi, -0.25)).epsilon(1e-15));
    for (int k = 0; k < 10; ++k) CHECK(psi0(2 * k + 1, 0.0).value == 0.0);
    for (int n : {0, 1, 2, 5, 9, 14, 20})
        for (double x : {0.0, 0.3, 1.1, 2.7, 4.5}) {
            CHECK(std::abs(psi0(n, x).value - static_cast<double>(hermite_function_sum(n, x))) < 1e-12);
        }
    // derivative by central differences
    for (int n : {3, 8})
        for (double x : {0.4, 1.9}) {
            const double h = 1e-5;
            const double fd = (psi0(n, x + h).value - psi0(n, x - h).value) / (2 * h);
            CHECK(std::abs(psi0(n, x).deriv - fd) < 1e-8);
        }
    // no overflow at high order
    const auto far = psi0(200, 20.0);
    CHECK(std::isfinite(far.value));
    CHECK(std::isfinite(far.deriv));
}

TEST_CASE("Weber function") {
    for (double x : {0.0, 0.7, 2.0, 5.0}) CHECK(std::abs(weber_d(0.0, x) - std::exp(-x * x / 4)) < 1e-10 * std::exp(-x * x / 4));
    CHECK(std::abs(weber_d(1.0, 0.0)) < 1e-14);  // lambda = 3
    for (const auto& o : oracle::weber) CHECK(rel(weber_d(o.mu, o.x), o.value) < 1e-8);
    CHECK_THROWS(weber_d(1.0, -1.0));
}

TEST_CASE("boundary values of the decaying solution") {
    for (int n = 0; n <= 40; ++n) CHECK(psi_plus0_boundary(4.0 * n + 3).value == 0.0);
    for (int n = 0; n <= 40; ++n) CHECK(psi_plus0_boundary(4.0 * n + 1).deriv == 0.0);
    CHECK(psi_plus0_boundary(1.0).value == doctest::Approx(1.0).epsilon(1e-15));
    for (const auto& o : oracle::boundary) {
        const auto b = psi_plus0_boundary(o.lambda);
        CHECK(std::abs(b.value - o.value) <= 1e-12 * (1 + std::abs(o.value)));
        CHECK(std::abs(b.deriv - o.deriv) <= 1e-12 * (1 + std::abs(o.deriv)));
        CHECK(std::abs(weber_d((o.lambda - 1) / 2, 0.0) - b.value) <= 1e-12 * (1 + std::abs(b.value)));
    }
}

TEST_CASE("kappa constants") {
    for (const auto& o : oracle::kappa) {
        const auto k = kappa_set(o.n);
        CHECK(k.kappa == 0.0);
        CHECK(rel(k.kappa_prime, o.kappa_prime) < 1e-12);
        CHECK(rel(k.kappa_dot, o.kappa_dot) < 1e-10);
        CHECK(rel(k.kappa_ddot, o.kappa_ddot) < 1e-9);
        CHECK(rel(k.kappa_dddot, o.kappa_dddot) < 1e-8);
        CHECK(rel(k.kappa_prime_dot, o.kappa_prime_dot) < 1e-10);
        CHECK(rel(k.kappa_prime_ddot, o.kappa_prime_ddot) < 1e-8);
    }
    const auto k5 = kappa_set(5);
    const double h = 1e-4;
    const double fd = (psi_plus0_boundary(23 + h).value - psi_plus0_boundary(23 - h).value) / (2 * h);
    CHECK(rel(k5.kappa_dot, fd) < 1e-7);
}

TEST_CASE("kappa combinations decay like 1/n") {
    double early = 0.0, late = 0.0;
    for (int n = 5; n <= 50; ++n) {
        const auto c = kappa_combinations(kappa_set(n));
        const double worst = n * std::max({std::abs(c.first), std::abs(c.second), std::abs(c.third)});
        CHECK(worst < 1.0);
        (n <= 25 ? early : late) = std::max(n <= 25 ? early : late, worst);
    }
    CHECK(late <= 1.5 * early);
}

TEST_CASE("companion solution chi_n^0") {
    for (int n : {0, 1, 2, 5, 10, 20}) {
        for (double x : {0.05, 0.5, 1.5, 3.0, 4.5}) {
            const auto c = chi0(n, x);
            const auto p = psi0(n, x);
            CHECK(std::abs(c.value * p.deriv - c.deriv * p.value - 1.0) < 1e-9);
        }
        const double x = 1e-4;
        CHECK(std::abs(chi0(n, x).value * psi0(n, x).value / x - (n % 2 ? 1.0 : -1.0)) < 1e-3);
    }
    // large-x product: measured -1/(2x) with the next terms of the series
    for (int n : {0, 3}) {
        const double x = 9.0, lam = 2.0 * n + 1;
        const double prod = chi0(n, x).value * psi0(n, x).value;
        const double series = -1 / (2 * x) - lam / (4 * x * x * x);
        CHECK(std::abs(prod - series) < 5e-4);
    }
}

}
