#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "oscspec/errors.hpp"
#include "oscspec/potential.hpp"
#include "oscspec/seqspace.hpp"

using namespace oscspec;

namespace {

// generalized binomial (a choose n) (-1)^n, straight from the product formula
double binom_neg(double a, int n) {
    double c = 1.0;
    for (int j = 0; j < n; ++j) c *= (a - j) / (j + 1);
    return n % 2 ? -c : c;
}

std::vector<double> unit(std::size_t k, std::size_t len) {
    std::vector<double> e(len, 0.0);
    e[k] = 1.0;
    return e;
}

std::vector<double> random_seq(std::mt19937_64& rng, std::size_t len, double decay) {
    std::normal_distribution<double> N01;
    std::vector<double> c(len);
    for (std::size_t k = 0; k < len; ++k) c[k] = N01(rng) * std::pow(1.0 + k, -decay);
    return c;
}

double poly(const std::vector<double>& c, double x) {
    double s = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
}

// analytic part of c(zeta) * sum_s kernel(s) zeta^s, expanded term by term
std::map<long, double> laurent_expand(const std::vector<double>& c, KernelSign sign, long M) {
    std::map<long, double> out;
    for (long k = 0; k < static_cast<long>(c.size()); ++k)
        for (long s = -M; s <= M; ++s) {
            const double ker = 2.0 / std::numbers::pi / (2.0 * s + 1.0) * (sign == KernelSign::plus && (s % 2 != 0) ? -1.0 : 1.0);
            out[k + s] += c[k] * ker;
        }
    return out;
}

}  // namespace

TEST_SUITE("seqspace") {

TEST_CASE("weighted norms") {
    CHECK(l2r_norm(std::vector<double>(7, 0.0), 0.75) == 0.0);
    CHECK(l2r_norm(unit(0, 5), 0.75) == doctest::Approx(1.0));
    CHECK(l2r_norm(unit(3, 5), 0.75) == doctest::Approx(std::pow(4.0, 0.75)));
    CHECK(l2r_norm(std::vector<double>{3.0, 4.0}, 0.0) == doctest::Approx(5.0));
}

TEST_CASE("square-root series") {
    const auto d = sqrt1mz_div(unit(0, 30));
    const auto m = sqrt1mz_mul(unit(0, 30));
    for (int n = 0; n < 30; ++n) {
        CHECK(d[n] == doctest::Approx(binom_neg(-0.5, n)).epsilon(1e-13));
        CHECK(m[n] == doctest::Approx(binom_neg(0.5, n)).epsilon(1e-13));
    }
    CHECK(d[1] == 0.5);
    CHECK(d[2] == 0.375);
    CHECK(m[1] == -0.5);
    CHECK(m[2] == -0.125);
    const auto p = sqrt1pz_series(10);
    for (int n = 0; n < 10; ++n) CHECK(p[n] == doctest::Approx(binom_neg(0.5, n) * (n % 2 ? -1 : 1)));
    std::mt19937_64 rng(3);
    const auto c = random_seq(rng, 200, 0.0);
    const auto back = sqrt1mz_mul(sqrt1mz_div(c));
    for (std::size_t n = 0; n < c.size(); ++n) CHECK(std::abs(back[n] - c[n]) < 1e-12);
}

TEST_CASE("Cauchy product evaluates as a polynomial product") {
    std::mt19937_64 rng(5);
    const auto a = random_seq(rng, 9, 0.0), b = random_seq(rng, 6, 0.0);
    const auto c = cauchy(a, b, a.size() + b.size() - 1);
    for (double x : {-0.9, -0.3, 0.2, 0.7, 1.1}) CHECK(poly(c, x) == doctest::Approx(poly(a, x) * poly(b, x)).epsilon(1e-12));
    CHECK(cauchy(a, b).size() == a.size());
}

TEST_CASE("projected kernel convolution") {
    const auto e0 = pp_inv_sqrt(KernelSign::minus, unit(0, 1), 64, 20);
    for (int n = 0; n < 20; ++n) CHECK(e0.coeffs[n] == doctest::Approx(2.0 / std::numbers::pi / (2 * n + 1)));
    std::mt19937_64 rng(7);
    const auto c = random_seq(rng, 12, 0.0);
    for (auto sign : {KernelSign::plus, KernelSign::minus}) {
        const long M = 40;
        const auto brute = laurent_expand(c, sign, M);
        // half-width M + 12 keeps every pair landing on indices < count inside the window
        const auto got = pp_inv_sqrt(sign, c, M + 12, 25);
        const auto exact = pp_inv_sqrt(sign, c, 1000, 25);
        for (long n = 0; n < 25; ++n) {
            CHECK(std::abs(exact.coeffs[n] - got.coeffs[n]) < 1e-15);
            CHECK(std::abs(got.coeffs[n] - brute.at(n)) < 1e-13);
        }
        const auto trunc = pp_inv_sqrt(sign, c, 3, 25);
        CHECK(trunc.tail_bound > 0.0);
        double worst = 0.0;
        for (long n = 0; n < 25; ++n) worst = std::max(worst, std::abs(trunc.coeffs[n] - exact.coeffs[n]));
        CHECK(worst <= trunc.tail_bound);
    }
    const auto a = random_seq(rng, 10, 0.0), b = random_seq(rng, 10, 0.0);
    std::vector<double> mix(10);
    for (int k = 0; k < 10; ++k) mix[k] = 2.0 * a[k] - 0.5 * b[k];
    const auto pa = pp_inv_sqrt(KernelSign::plus, a, 100), pb = pp_inv_sqrt(KernelSign::plus, b, 100),
               pm = pp_inv_sqrt(KernelSign::plus, mix, 100);
    for (int k = 0; k < 10; ++k) CHECK(pm.coeffs[k] == doctest::Approx(2.0 * pa.coeffs[k] - 0.5 * pb.coeffs[k]));
}

TEST_CASE("operator A") {
    const auto r = op_A(std::vector<double>{1.0, -1.0}, 100, 5);
    CHECK(r.value.coeffs[0] == doctest::Approx(4.0 / std::numbers::pi));
    CHECK(r.domain_defect == 0.0);
    const auto z = op_A(std::vector<double>(6, 0.0), 100);
    for (double x : z.value.coeffs) CHECK(x == 0.0);
    CHECK(op_A(std::vector<double>{1.0, 0.5}, 10).domain_defect == doctest::Approx(1.5));
}

TEST_CASE("operator A is boundedly invertible on the f(1) = 0 subspace") {
    std::vector<double> conds;
    for (int K : {8, 16, 32, 64}) {
        // orthonormal basis (weighted coordinates) of the zero-sum subspace
        Eigen::VectorXd w(K);
        for (int k = 0; k < K; ++k) w(k) = std::pow(1.0 + k, -0.75);
        Eigen::MatrixXd P = Eigen::MatrixXd::Identity(K, K) - w * w.transpose() / w.squaredNorm();
        Eigen::JacobiSVD<Eigen::MatrixXd> basis(P, Eigen::ComputeFullU);
        const Eigen::MatrixXd Q = basis.matrixU().leftCols(K - 1);
        Eigen::MatrixXd A(K, K - 1);
        for (int j = 0; j < K - 1; ++j) {
            std::vector<double> f(K);
            for (int k = 0; k < K; ++k) f[k] = Q(k, j) / std::pow(1.0 + k, 0.75);
            const auto g = op_A(f, 4 * K, K);
            CHECK(std::abs(g.domain_defect) < 1e-12);
            for (int n = 0; n < K; ++n) A(n, j) = std::pow(1.0 + n, 0.75) * g.value.coeffs[n];
        }
        std::mt19937_64 rng(K);
        const auto c = random_seq(rng, K - 1, 0.0);
        const Eigen::VectorXd cv = Eigen::Map<const Eigen::VectorXd>(c.data(), K - 1);
        const Eigen::VectorXd back = A.colPivHouseholderQr().solve(A * cv);
        CHECK((back - cv).norm() < 1e-9 * cv.norm());
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
        const auto sv = svd.singularValues();
        conds.push_back(sv(0) / sv(K - 2));
    }
    for (double c : conds) CHECK(c < 2.0);
}

TEST_CASE("leading-term decomposition") {
    const auto d = h_decompose(HSeq::from_f(unit(0, 40)));
    const double v = std::sqrt(2.0 / std::numbers::pi);
    CHECK(d.v == doctest::Approx(v));
    for (int n = 0; n < 40; ++n) CHECK(d.h0[n] == doctest::Approx(binom_neg(-0.5, n) - v / std::sqrt(2.0 * n + 1)));
    const auto z = h_decompose(HSeq::from_f(std::vector<double>(10, 0.0)));
    CHECK(z.v == 0.0);
    for (double x : z.h0) CHECK(x == 0.0);
    std::mt19937_64 rng(9);
    const auto hs = HSeq::from_h(random_seq(rng, 30, 1.0));
    const auto dd = h_decompose(hs);
    for (int n = 0; n < 30; ++n) CHECK(dd.h0[n] + dd.v / std::sqrt(2.0 * n + 1) == doctest::Approx(hs.h[n]));
    CHECK(hs.norm() == doctest::Approx(l2r_norm(hs.f, 0.75)));
}

TEST_CASE("leading coefficient of qhat is the mean of q") {
    const auto g = default_grid(100);
    const auto q = Potential::from_function([](double x) { return std::exp(-x * x); }, g);
    const double mean = std::sqrt(std::numbers::pi) / 2.0 / std::numbers::pi;
    for (std::size_t L : {256, 1024}) {
        const auto d = h_decompose(HSeq::from_h(qhat_seq(q, L)));
        CHECK(std::abs(d.v - mean) < 1e-6 * mean);
    }
}

TEST_CASE("random sequences in the h-space") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 4; ++trial) {
        auto f = random_seq(rng, 4096, 1.3);
        double s = 0.0;
        for (double x : f) s += x;
        f[0] -= s;
        const auto hs = HSeq::from_f(f);
        const double fn = hs.norm();
        double decay = 0.0;
        for (std::size_t n = 10; n < hs.h.size(); ++n)
            decay = std::max(decay, std::abs(hs.h[n]) * std::pow(n, 0.75) / std::sqrt(std::log(n)));
        CHECK(decay < 3.0 * fn);
        std::vector<double> diff(hs.h.size() - 1);
        for (std::size_t n = 0; n + 1 < hs.h.size(); ++n) diff[n] = hs.h[n] - hs.h[n + 1];
        for (std::size_t len : {256, 1024, 4095})
            CHECK(l2r_norm(std::span(diff).first(len), 0.75) < 3.0 * fn);
        const double low = l2r_norm(std::span(hs.h).first(1024), 0.25), high = l2r_norm(hs.h, 0.25);
        CHECK(high < 2.0 * low);
        CHECK(high < 3.0 * fn);
        const auto round = HSeq::from_h(hs.h);
        for (std::size_t n = 0; n < 64; ++n) CHECK(std::abs(round.f[n] - f[n]) < 1e-12);
    }
}

TEST_CASE("two descriptions of the zero-mean h-space agree") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 3; ++trial) {
        auto f = random_seq(rng, 16, 0.0);
        double s = 0.0;
        for (double x : f) s += x;
        f[0] -= s;
        const std::size_t L = 20000;
        const auto g = op_A(f, static_cast<long>(L) + 16, L).value.coeffs;
        const auto h_from_g = pp_conj_inv_sqrt1mz(g, 40);
        const auto h = sqrt1mz_div(f, 40);
        double worst = 0.0;
        for (int n = 0; n < 40; ++n) worst = std::max(worst, std::abs(h_from_g[n] - h[n]));
        CHECK(worst < 1e-5 * l2r_norm(f, 0.75));
    }
}

TEST_CASE("odd kernel sum with a modelled tail") {
    // finite sequences need no tail
    const std::vector<double> c{1.0, 2.0, -1.0};
    CHECK(odd_kernel_sum(c, 1) == doctest::Approx(1.0 / 3.0 + 2.0 - 1.0 / -1.0));
    // m^{-1/2} model: truncated sum plus tail matches a much longer direct sum
    std::vector<double> longer(400000), shortv(2000);
    for (std::size_t m = 0; m < longer.size(); ++m) longer[m] = 1.0 / std::sqrt(m + 1.0);
    std::copy_n(longer.begin(), shortv.size(), shortv.begin());
    const double ref = odd_kernel_sum(longer, 3, 1.0);
    CHECK(std::abs(odd_kernel_sum(shortv, 3, 1.0) - ref) < 1e-4);
    CHECK_THROWS_AS(odd_kernel_sum(std::vector<double>(3, 1.0), 50, 1.0), input_error);
}

TEST_CASE("fitted exponent") {
    std::vector<double> r(40);
    for (std::size_t n = 1; n < r.size(); ++n) r[n] = 3.0 * std::pow(n, -1.25);
    CHECK(fitted_exponent(r, 4, 39) == doctest::Approx(-1.25));
    CHECK_THROWS_AS(fitted_exponent(r, 0, 10), input_error);
    CHECK_THROWS_AS(fitted_exponent(r, 5, 40), input_error);
}

}
