#include "oscspec/seqspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oscspec/errors.hpp"
#include "oscspec/specfun.hpp"

namespace oscspec {

double l2r_norm(std::span<const double> c, double r) {
    double s = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) s += std::pow(1.0 + static_cast<double>(n), 2.0 * r) * c[n] * c[n];
    return std::sqrt(s);
}

std::vector<double> sqrt1mz_series(std::size_t count) {
    std::vector<double> e(count);
    if (count == 0) return e;
    e[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j) e[j] = e[j - 1] * (static_cast<double>(j) - 1.5) / static_cast<double>(j);
    return e;
}

std::vector<double> sqrt1pz_series(std::size_t count) {
    auto e = sqrt1mz_series(count);
    for (std::size_t j = 1; j < count; j += 2) e[j] = -e[j];
    return e;
}

std::vector<double> inv_sqrt1mz_series(std::size_t count) { return binom_E_table(count); }

std::vector<double> cauchy(std::span<const double> a, std::span<const double> b, std::size_t count) {
    if (count == 0) count = a.size();
    std::vector<double> out(count, 0.0);
    for (std::size_t i = 0; i < std::min(a.size(), count); ++i) {
        if (a[i] == 0.0) continue;
        const std::size_t jmax = std::min(b.size(), count - i);
        for (std::size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<double> sqrt1mz_mul(std::span<const double> c, std::size_t count) {
    if (count == 0) count = c.size();
    return cauchy(c, sqrt1mz_series(count), count);
}

std::vector<double> sqrt1mz_div(std::span<const double> c, std::size_t count) {
    if (count == 0) count = c.size();
    return cauchy(c, inv_sqrt1mz_series(count), count);
}

double inv_sqrt_kernel(KernelSign sign, long s) {
    const double base = 2.0 / std::numbers::pi / (2.0 * static_cast<double>(s) + 1.0);
    if (sign == KernelSign::minus) return base;
    return (s % 2 == 0) ? base : -base;
}

KernelResult pp_inv_sqrt(KernelSign sign, std::span<const double> c, long half_width, std::size_t count) {
    if (half_width < 0) throw input_error("negative Laurent half-width");
    if (count == 0) count = c.size();
    KernelResult r;
    r.coeffs.assign(count, 0.0);
    for (std::size_t n = 0; n < count; ++n) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            const long s = static_cast<long>(n) - static_cast<long>(k);
            const double term = c[k] * inv_sqrt_kernel(sign, s);
            if (std::labs(s) <= half_width) {
                r.coeffs[n] += term;
            } else {
                r.tail_bound += std::abs(term);
            }
        }
    }
    return r;
}

OpAResult op_A(std::span<const double> f, long half_width, std::size_t count) {
    OpAResult r{pp_inv_sqrt(KernelSign::minus, f, half_width, count), 0.0};
    for (double x : f) r.domain_defect += x;
    return r;
}

std::vector<double> pp_conj_inv_sqrt1mz(std::span<const double> g, std::size_t count) {
    if (count == 0) count = g.size();
    const auto e = inv_sqrt1mz_series(g.size());
    std::vector<double> h(count, 0.0);
    for (std::size_t n = 0; n < std::min(count, g.size()); ++n) {
        double s = 0.0;
        for (std::size_t m = 0; n + m < g.size(); ++m) s += g[n + m] * e[m];
        h[n] = s;
    }
    return h;
}

double odd_kernel_sum(std::span<const double> c, long n, double tail_amp) {
    double s = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) s += c[m] / (2.0 * (n - static_cast<double>(m)) + 1.0);
    if (tail_amp != 0.0) {
        // sum_{m >= L} m^{-1/2}/(2(n-m)+1) ~ -int_{L-1/2}^inf du / (sqrt(u)(2u - 2n - 1))
        const double A = static_cast<double>(c.size()) - 0.5;
        const double a = std::sqrt((2.0 * n + 1.0) / 2.0);
        if (A <= a * a + 1.0) throw input_error("odd_kernel_sum: too few entries for the tail model");
        const double ra = std::sqrt(A);
        s -= tail_amp * std::log((ra + a) / (ra - a)) / (2.0 * a);
    }
    return s;
}

HSeq HSeq::from_f(std::vector<double> f) {
    HSeq s;
    s.h = sqrt1mz_div(f);
    s.f = std::move(f);
    return s;
}

HSeq HSeq::from_h(std::vector<double> h) {
    HSeq s;
    s.f = sqrt1mz_mul(h);
    s.h = std::move(h);
    return s;
}

HDecomposition h_decompose(const HSeq& h) {
    HDecomposition d;
    double f1 = 0.0;
    for (double x : h.f) f1 += x;
    d.v = std::sqrt(2.0 / std::numbers::pi) * f1;
    d.h0.resize(h.h.size());
    for (std::size_t n = 0; n < h.h.size(); ++n) d.h0[n] = h.h[n] - d.v / std::sqrt(2.0 * n + 1.0);
    return d;
}

double fitted_exponent(std::span<const double> residuals, std::size_t first, std::size_t last) {
    if (last >= residuals.size() || first == 0 || last <= first) throw input_error("bad fit window");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double k = 0;
    for (std::size_t n = first; n <= last; ++n) {
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(std::abs(residuals[n]) + 1e-300);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        k += 1;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace oscspec
