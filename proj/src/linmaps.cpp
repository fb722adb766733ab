#include "oscspec/linmaps.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>

#include "oscspec/errors.hpp"
#include "oscspec/seqspace.hpp"
#include "oscspec/specfun.hpp"

namespace oscspec {

namespace {

constexpr double pi = std::numbers::pi;

std::size_t basis_size(const Potential& q, std::size_t requested, std::size_t count) {
    if (requested > 0) return requested;
    if (q.hermite()) return std::max<std::size_t>(q.hermite()->size(), 1);
    return 4 * std::max<std::size_t>(count, 1);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> odd_part(std::span<const double> a, std::size_t count) {
    std::vector<double> out(count, 0.0);
    for (std::size_t k = 0; k < count && 2 * k + 1 < a.size(); ++k) out[k] = a[2 * k + 1];
    return out;
}

std::vector<double> alternate(std::span<const double> a) {
    std::vector<double> out(a.begin(), a.end());
    for (std::size_t j = 1; j < out.size(); j += 2) out[j] = -out[j];
    return out;
}

std::vector<double> spread(std::span<const double> a, std::size_t count) {
    std::vector<double> out(count, 0.0);
    for (std::size_t k = 0; k < a.size() && 2 * k < count; ++k) out[2 * k] = a[k];
    return out;
}

}  // namespace

std::vector<double> map_F(const Potential& q, std::size_t count) {
    std::vector<double> F(count, 0.0);
    const auto E = binom_E_table(count);
    const double c = std::pow(2.0 * pi, -0.25);
    if (q.hermite()) {
        const auto& h = *q.hermite();
        for (std::size_t k = 0; k < std::min(count, h.size()); ++k) F[k] = c * std::sqrt(E[k]) * 0.5 * h[k];
        return F;
    }
    const auto p = scaled_hermite_products(q, 2 * count);
    for (std::size_t k = 0; k < count; ++k) F[k] = c * std::sqrt(E[k]) * p[2 * k];
    return F;
}

std::vector<double> map_G(const Potential& q, std::size_t count) {
    std::vector<double> G(count, 0.0);
    const auto E = binom_E_table(count);
    const auto p = scaled_hermite_products(q, 2 * count + 1);
    const double c = -std::pow(2.0 * pi, 0.25) / 2.0;
    for (std::size_t k = 0; k < count; ++k) G[k] = c * p[2 * k + 1] / std::sqrt((2.0 * k + 1.0) * E[k]);
    return G;
}

std::vector<double> map_G_from_F(std::span<const double> F, std::size_t count) {
    auto r = pp_inv_sqrt(KernelSign::plus, F, LONG_MAX, count);
    for (double& x : r.coeffs) x *= -pi / 2.0;
    return r.coeffs;
}

std::vector<double> map_FD_from_F(std::span<const double> F, std::size_t count) {
    const std::size_t len = 2 * count + 2;
    return odd_part(cauchy(F, sqrt1pz_series(len), len), count);
}

std::vector<double> map_GD_from_F(std::span<const double> F, std::size_t count) {
    const std::size_t len = 2 * count + 2;
    const auto Fm = alternate(F);
    return odd_part(cauchy(Fm, sqrt1pz_series(len), len), count);
}

std::vector<double> map_FD(const Potential& q, std::size_t count, std::size_t basis) {
    return map_FD_from_F(map_F(q, basis_size(q, basis, count)), count);
}

std::vector<double> map_GD(const Potential& q, std::size_t count, std::size_t basis) {
    return map_GD_from_F(map_F(q, basis_size(q, basis, count)), count);
}

double series_at_one(std::span<const double> c) {
    double s = 0.0;
    for (double x : c) s += x;
    return s;
}

double series_at_minus_one(std::span<const double> c) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += (k % 2 == 0) ? c[k] : -c[k];
    return s;
}

double gd_at_one(std::span<const double> F) { return series_at_minus_one(F) / std::numbers::sqrt2; }

TildeResult tilde_from_F(std::span<const double> F, std::size_t count, const TildeSettings& cfg) {
    const std::size_t L = std::max(cfg.gd_length, 4 * count);
    auto g = map_GD_from_F(F, L);
    g[0] -= gd_at_one(F);
    auto r = pp_inv_sqrt(KernelSign::minus, g, LONG_MAX, count);
    TildeResult out;
    out.coeffs = std::move(r.coeffs);
    for (double& x : out.coeffs) x *= pi / 2.0;
    // g_k ~ C k^{-3/2}: the dropped part of sum g_k/(2(n-k)+1) is below |g_{L-1}|
    out.kernel_bound = std::abs(g.back());
    return out;
}

TildeResult tilde_n(const Potential& q, std::size_t count, const TildeSettings& cfg) {
    return tilde_from_F(map_F(q, basis_size(q, cfg.basis, count)), count, cfg);
}

LinearModelData linear_model(const Potential& q, std::size_t N, const TildeSettings& cfg) {
    LinearModelData d;
    const auto qh = qhat_seq(q, 2 * N);
    d.ahat.resize(N);
    for (std::size_t n = 0; n < N; ++n) d.ahat[n] = 2.0 * qh[2 * n + 1];
    d.q0 = q.q0();
    d.btilde = tilde_n(q, N, cfg).coeffs;
    for (double& x : d.btilde) x *= -2.0;
    return d;
}

std::vector<IdentityCheck> coefficient_identities(const Potential& q, const IdentitySettings& cfg) {
    const std::size_t nc = cfg.count;
    const std::size_t K = std::max(basis_size(q, cfg.basis, nc), 2 * nc + 2);
    const std::size_t L = cfg.extension;
    const double tol = cfg.tolerance;
    const auto F = map_F(q, K);
    const auto qh = qhat_seq(q, 2 * nc + 2);
    const auto qc = qcheck_seq(q, 2 * nc + 2);
    const double F1 = series_at_one(F);
    std::vector<IdentityCheck> out;

    out.push_back({"qhat = F/sqrt(1-z)", max_abs_diff(qh, sqrt1mz_div(F, qh.size())), tol});

    out.push_back({"F(1) = int q/sqrt(2 pi)",
                   std::abs(F1 - simpson(q.values(), q.grid().h()) / std::sqrt(2.0 * pi)), tol});
    out.push_back({"F(-1) = q(0)/2^{3/2}", std::abs(series_at_minus_one(F) - q.q0() / std::pow(2.0, 1.5)), tol});

    {
        const auto Gd = map_G(q, 2 * nc);
        const auto Gf = map_G_from_F(F, 2 * nc);
        out.push_back({"G = -(pi/2) P+[F/sqrt(zeta)]", max_abs_diff(Gd, Gf), tol});
    }
    {
        // alternating tail: average the partial sums ending at L and L+1
        const auto G = map_G_from_F(F, L + qc.size() + 1);
        const auto E = binom_E_table(L + 1);
        double res = 0.0, tail = 0.0;
        for (std::size_t n = 0; n < qc.size(); ++n) {
            double s = 0.0;
            for (std::size_t m = 0; m < L; ++m) s += G[n + m] * E[m];
            const double last = G[n + L] * E[L];
            res = std::max(res, std::abs(qc[n] - (s + 0.5 * last)));
            tail = std::max(tail, std::abs(last));
        }
        out.push_back({"qcheck = P+[G/sqrt(1-conj zeta)]", res, tol + tail});
    }
    {
        const auto qh_long = sqrt1mz_div(F, 2 * L);
        std::vector<double> even(L);
        for (std::size_t m = 0; m < L; ++m) even[m] = qh_long[2 * m];
        const double amp = F1 / std::sqrt(2.0 * pi);
        double res = 0.0;
        for (std::size_t n = 0; n < nc; ++n) {
            res = std::max(res, std::abs(qc[2 * n + 1] - odd_kernel_sum(even, static_cast<long>(n), amp)));
        }
        out.push_back({"qcheck_odd = (pi/2) P+[qhat_even/sqrt(-zeta)]", res, tol + std::pow(double(L), -1.5)});
    }
    {
        const auto FD = map_FD_from_F(F, K);
        const auto GD = map_GD_from_F(F, K);
        auto a = cauchy(spread(FD, K), sqrt1pz_series(K), K);
        const auto b = cauchy(spread(GD, K), sqrt1mz_series(K), K);
        for (std::size_t j = 0; j < K; ++j) a[j] += b[j];
        out.push_back({"F = F_D(z^2) sqrt(1+z) + G_D(z^2) sqrt(1-z)", max_abs_diff(a, F), tol});

        const auto qh_odd = sqrt1mz_div(FD, nc);
        double res = 0.0;
        for (std::size_t n = 0; n < nc; ++n) res = std::max(res, std::abs(qh[2 * n + 1] - qh_odd[n]));
        out.push_back({"qhat_odd = F_D/sqrt(1-z)", res, tol});
    }
    {
        const auto GD = map_GD_from_F(F, L);
        double s = series_at_one(GD);
        const double C = GD.back() * std::pow(double(L - 1), 1.5);
        s += 2.0 * C / std::sqrt(double(L) - 0.5);
        out.push_back({"G_D(1) = q(0)/4 (partial sum)", std::abs(s - q.q0() / 4.0), tol + std::abs(C) * std::pow(double(L), -1.5)});
        out.push_back({"G_D(1) = q(0)/4 (closed form)", std::abs(gd_at_one(F) - q.q0() / 4.0), tol});
    }
    {
        const auto tq = tilde_from_F(F, nc, {.basis = K, .gd_length = L});
        const auto qh_odd = sqrt1mz_div(map_FD_from_F(F, L), L);
        const double amp = F1 / std::sqrt(2.0 * pi);
        double res = 0.0;
        for (std::size_t n = 0; n < nc; ++n) {
            const double rhs = q.q0() / (4.0 * (2.0 * n + 1.0)) + tq.coeffs[n] +
                               odd_kernel_sum(qh_odd, static_cast<long>(n), amp);
            res = std::max(res, std::abs(qc[2 * n + 1] - rhs));
        }
        out.push_back({"qcheck_odd = q(0)/(4(2n+1)) + qtilde + sum", res, tol + tq.kernel_bound});
    }
    return out;
}

}  // namespace oscspec
