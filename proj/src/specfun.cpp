#include "oscspec/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "oscspec/detail/shoot.hpp"
#include "oscspec/errors.hpp"

namespace oscspec {

namespace {

constexpr double pi = std::numbers::pi;
const double log2v = std::log(2.0);
const double log_sqrt_pi = 0.5 * std::log(pi);

struct LogGamma {
    double log_abs;
    int sign;
};

LogGamma log_gamma(double z) {
    if (z <= 0.0 && z == std::floor(z)) {
        throw input_error("Gamma pole at z = " + std::to_string(z));
    }
    int sign = 1;
    const double lg = boost::math::lgamma(z, &sign);
    return {lg, sign};
}

double checked_exp(double e) {
    if (e > 709.0) throw numerical_error("Gamma factor overflows double range");
    return std::exp(e);
}

}  // namespace

double binom_E(int k) {
    double e = 1.0;
    for (int j = 1; j <= k; ++j) e *= (2.0 * j - 1.0) / (2.0 * j);
    return e;
}

std::vector<double> binom_E_table(std::size_t count) {
    std::vector<double> e(count);
    if (count == 0) return e;
    e[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j) {
        const double jd = static_cast<double>(j);
        e[j] = e[j - 1] * (2.0 * jd - 1.0) / (2.0 * jd);
    }
    return e;
}

double nu0(int n) {
    const double nd = n;
    return std::log(4.0) + std::lgamma(2.0 * nd + 2.0) - log_sqrt_pi - 2.0 * nd * log2v -
           2.0 * std::lgamma(nd + 1.0);
}

void psi0_all(double x, std::span<double> values, std::span<double> derivs) {
    const std::size_t count = values.size();
    if (count == 0) return;
    const double half_x2 = 0.5 * x * x;
    constexpr double big = 1e150;
    const double log_big = std::log(big);
    double log_scale = 0.0;
    double prev = 0.0;
    double cur = std::pow(pi, -0.25);
    for (std::size_t k = 0; k < count; ++k) {
        values[k] = cur * std::exp(log_scale - half_x2);
        const double kd = static_cast<double>(k);
        const double next = std::sqrt(2.0 / (kd + 1.0)) * x * cur - std::sqrt(kd / (kd + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > big) {
            cur /= big;
            prev /= big;
            log_scale += log_big;
        }
    }
    if (derivs.size() >= count) {
        for (std::size_t k = 0; k < count; ++k) {
            derivs[k] = -x * values[k];
            if (k > 0) derivs[k] += std::sqrt(2.0 * static_cast<double>(k)) * values[k - 1];
        }
    }
}

ValueDeriv psi0(int n, double x) {
    if (n < 0) throw input_error("negative Hermite index");
    std::vector<double> v(n + 1), d(n + 1);
    psi0_all(x, v, d);
    return {v[n], d[n]};
}

double scaled_hermite(int n, double x) {
    return std::pow(2.0, 0.25) * psi0(n, std::numbers::sqrt2 * x).value;
}

ScaledPair psi_plus0_boundary_scaled(double lambda) {
    const auto ga = log_gamma((lambda + 1.0) / 4.0);
    const auto gb = log_gamma((lambda + 3.0) / 4.0);
    const double lf = -log_sqrt_pi + (lambda - 1.0) / 4.0 * log2v + ga.log_abs;
    const double lg = -log_sqrt_pi + (lambda + 3.0) / 4.0 * log2v + gb.log_abs;
    const double arg = (lambda - 1.0) / 4.0;
    const double top = std::max(lf, lg);
    ScaledPair out;
    out.log_scale = top;
    out.value = boost::math::cos_pi(arg) * ga.sign * std::exp(lf - top);
    out.deriv = boost::math::sin_pi(arg) * gb.sign * std::exp(lg - top);
    return out;
}

ValueDeriv psi_plus0_boundary(double lambda) {
    const auto s = psi_plus0_boundary_scaled(lambda);
    const double f = checked_exp(s.log_scale);
    return {s.value * f, s.deriv * f};
}

double weber_d(double mu, double x) {
    if (std::abs(mu) > weber_max_order) throw input_error("Weber order beyond configured maximum");
    if (x < 0.0) throw input_error("weber_d needs x >= 0");
    const double lambda = 2.0 * mu + 1.0;
    const auto closed = psi_plus0_boundary_scaled(lambda);
    const double y = x / std::numbers::sqrt2;
    if (y == 0.0) return closed.value * checked_exp(closed.log_scale);

    const double ystart = std::max(y, std::sqrt(std::max(lambda, 0.0))) + 10.0;
    detail::ShootState st;
    const double slope = (lambda - 1.0) / (2.0 * ystart) - ystart;
    st.s = {1.0, slope, 0.0, 0.0, 0.0};
    const std::array<double, 2> stops{y, 0.0};
    double at_y = 0.0, ls_y = 0.0;
    ValueDeriv at_zero;
    double ls_zero = 0.0;
    detail::shoot([](double) { return 0.0; }, lambda, st, ystart, stops, detail::ShootSettings{},
                  [&](std::size_t k, const detail::ShootState& s) {
                      if (k == 0) {
                          at_y = s.s[0];
                          ls_y = s.log_scale;
                      } else {
                          at_zero = {s.s[0], s.s[1]};
                          ls_zero = s.log_scale;
                      }
                  });
    const double w2 = 1.0 + std::abs(lambda);
    const double num = closed.value * at_zero.value + closed.deriv * at_zero.deriv / w2;
    const double den = at_zero.value * at_zero.value + at_zero.deriv * at_zero.deriv / w2;
    return num / den * at_y * checked_exp(closed.log_scale - ls_zero + ls_y);
}

ValueDeriv chi0(int n, double x) {
    if (n < 0) throw input_error("negative index");
    const auto p = psi0(n, 0.0);
    detail::ShootState st;
    if (n % 2 == 0) {
        st.s = {0.0, -1.0 / p.value, 0.0, 0.0, 0.0};
    } else {
        st.s = {1.0 / p.deriv, 0.0, 0.0, 0.0, 0.0};
    }
    if (x == 0.0) return {st.s[0], st.s[1]};
    const std::array<double, 1> stops{x};
    ValueDeriv out;
    detail::shoot([](double) { return 0.0; }, 2.0 * n + 1.0, st, 0.0, stops, detail::ShootSettings{},
                  [&](std::size_t, const detail::ShootState& s) {
                      const double f = checked_exp(s.log_scale);
                      out = {s.s[0] * f, s.s[1] * f};
                  });
    return out;
}

BoundaryConstants kappa_set(int n) {
    auto k = kappa_set_scaled(n);
    const double f = checked_exp(k.log_scale);
    for (double* x : {&k.kappa_prime, &k.kappa_dot, &k.kappa_ddot, &k.kappa_dddot, &k.kappa_prime_dot, &k.kappa_prime_ddot})
        *x *= f;
    k.log_scale = 0.0;
    return k;
}

BoundaryConstants kappa_set_scaled(int n) {
    if (n < 0) throw input_error("negative index");
    using boost::math::digamma;
    using boost::math::trigamma;
    const double lambda = 4.0 * n + 3.0;
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
    const double a = (lambda + 1.0) / 4.0;
    const double b = (lambda + 3.0) / 4.0;
    const double log_f = -log_sqrt_pi + (lambda - 1.0) / 4.0 * log2v + std::lgamma(a);
    const double f = 1.0;
    const double g = std::exp(log2v + std::lgamma(b) - std::lgamma(a));
    const double lf1 = log2v / 4.0 + digamma(a) / 4.0;
    const double lf2 = trigamma(a) / 16.0;
    const double lg1 = log2v / 4.0 + digamma(b) / 4.0;
    const double lg2 = trigamma(b) / 16.0;

    // cos((lambda-1)pi/4) and its derivatives at lambda = 4n+3
    const double c1 = -sgn * pi / 4.0;
    const double c3 = sgn * pi * pi * pi / 64.0;
    const double f1 = f * lf1;
    const double f2 = f * (lf2 + lf1 * lf1);

    BoundaryConstants k;
    k.n = n;
    k.kappa = 0.0;
    k.kappa_dot = c1 * f;
    k.kappa_ddot = 2.0 * c1 * f1;
    k.kappa_dddot = c3 * f + 3.0 * c1 * f2;
    k.kappa_prime = sgn * g;
    k.kappa_prime_dot = sgn * g * lg1;
    k.kappa_prime_ddot = sgn * g * (lg2 + lg1 * lg1 - pi * pi / 16.0);
    k.log_scale = log_f;
    return k;
}

KappaCombinations kappa_combinations(const BoundaryConstants& k) {
    KappaCombinations c;
    const double r1 = k.kappa_prime_dot / k.kappa_prime;
    c.first = r1 - k.kappa_ddot / (2.0 * k.kappa_dot);
    c.second = k.kappa_prime_ddot / k.kappa_prime - r1 * r1 + pi * pi / 16.0;
    c.third = k.kappa_dddot / (3.0 * k.kappa_dot) -
              k.kappa_ddot * k.kappa_ddot / (4.0 * k.kappa_dot * k.kappa_dot) + pi * pi / 48.0;
    return c;
}

}  // namespace oscspec
