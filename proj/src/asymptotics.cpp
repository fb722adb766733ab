#include "oscspec/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oscspec/errors.hpp"
#include "oscspec/seqspace.hpp"
#include "oscspec/specfun.hpp"

namespace oscspec {

namespace {

struct MuSource {
    std::span<const double> mu;
    std::span<const double> ext;
    double v;
    double operator()(std::size_t m) const {
        if (m < mu.size()) return mu[m];
        if (m - mu.size() < ext.size()) return ext[m - mu.size()];
        return v / std::sqrt(2.0 * static_cast<double>(m) + 1.0);
    }
};

// log[psi_+^0(0, sigma_n^0 + mu)/(kappa_dot mu)], with the removable point at mu = 0
double log_boundary_ratio(int n, double mu) {
    const auto k = kappa_set_scaled(n);
    if (std::abs(mu) < 1e-3) {
        const double r = 1.0 + k.kappa_ddot / (2.0 * k.kappa_dot) * mu + k.kappa_dddot / (6.0 * k.kappa_dot) * mu * mu;
        return std::log(r);
    }
    const auto b = psi_plus0_boundary_scaled(4.0 * n + 3.0 + mu);
    const double denom = k.kappa_dot * mu;
    if ((b.value > 0.0) != (denom > 0.0)) {
        throw numerical_error("eigenvalue shift at index " + std::to_string(n) + " leaves the admissible interval");
    }
    return std::log(std::abs(b.value)) + b.log_scale - std::log(std::abs(denom)) - k.log_scale;
}

// sum_{m > M} v (2m+1)^{-1/2} / (4 (m-n)^2)
double quadratic_tail(double v, int n, std::size_t M) {
    if (v == 0.0) return 0.0;
    const std::size_t far = 64 * (M + 1);
    double s = 0.0;
    for (std::size_t m = M + 1; m < far; ++m) {
        const double d = static_cast<double>(m) - n;
        s += 1.0 / (std::sqrt(2.0 * m + 1.0) * 4.0 * d * d);
    }
    s += std::pow(static_cast<double>(far) - 0.5, -1.5) / (6.0 * std::numbers::sqrt2);
    return v * s;
}

struct Terms {
    std::size_t M;
    double v;
};

Terms resolve(std::span<const double> mu, const CorrectionSettings& cfg) {
    const std::size_t M = cfg.product_terms ? cfg.product_terms : 8 * mu.size();
    double v = 0.0;
    if (cfg.tail_v) {
        v = *cfg.tail_v;
    } else {
        std::vector<double> all(mu.begin(), mu.end());
        all.insert(all.end(), cfg.extension.begin(), cfg.extension.end());
        v = leading_amplitude(all);
    }
    return {std::max(M, mu.size()), v};
}

}  // namespace

double predict_sigma(const Potential& q, int n) { return 4.0 * n + 3.0 + 2.0 * qhat(q, 2 * n + 1); }

std::vector<double> predict_sigma_seq(const Potential& q, std::size_t count) {
    const auto qh = qhat_seq(q, 2 * count);
    std::vector<double> out(count);
    for (std::size_t n = 0; n < count; ++n) out[n] = 4.0 * n + 3.0 + 2.0 * qh[2 * n + 1];
    return out;
}

double leading_amplitude(std::span<const double> mu) {
    if (mu.empty()) return 0.0;
    return h_decompose(HSeq::from_h({mu.begin(), mu.end()})).v;
}

double correction_R(std::span<const double> mu, int n, const CorrectionSettings& cfg) {
    if (n < 0 || static_cast<std::size_t>(n) >= mu.size()) throw input_error("correction index outside the data");
    const auto [M, v] = resolve(mu, cfg);
    const MuSource src{mu, cfg.extension, v};
    const double mun = mu[n];
    const auto k = kappa_set_scaled(n);
    double logsum = 0.0, odd = 0.0;
    for (std::size_t m = 0; m <= M; ++m) {
        const double mm = src(m);
        const double d = static_cast<double>(n) - static_cast<double>(m);
        odd += mm / (2.0 * d + 1.0);
        if (static_cast<int>(m) != n) logsum += std::log1p(-mm / (4.0 * d + mun));
    }
    const double tail = (1.0 - mun / 2.0) * quadratic_tail(v, n, M);
    return -2.0 * (log_boundary_ratio(n, mun) + logsum) + 2.0 * k.kappa_prime_dot / k.kappa_prime * mun - odd + tail;
}

CorrectionPieces correction_R_pieces(std::span<const double> mu, int n, const CorrectionSettings& cfg) {
    if (n < 0 || static_cast<std::size_t>(n) >= mu.size()) throw input_error("correction index outside the data");
    const auto [M, v] = resolve(mu, cfg);
    const MuSource src{mu, cfg.extension, v};
    const double mun = mu[n];
    const auto k = kappa_set_scaled(n);
    CorrectionPieces p;
    p.log_ratio = -2.0 * log_boundary_ratio(n, mun) + 2.0 * k.kappa_prime_dot / k.kappa_prime * mun;
    const double t0 = quadratic_tail(v, n, M);
    double prod = 0.0, kern = 0.0;
    for (std::size_t m = 0; m <= M; ++m) {
        const double mm = src(m);
        const double d = static_cast<double>(n) - static_cast<double>(m);
        if (static_cast<int>(m) == n) {
            kern -= mm;
            continue;
        }
        prod -= 2.0 * std::log1p(-mm / (4.0 * d + mun)) + mm / (2.0 * d);
        kern += mm / (2.0 * d) - mm / (2.0 * d + 1.0);
    }
    p.products = prod - 0.5 * mun * t0;
    p.kernels = kern + t0;
    return p;
}

std::vector<double> correction_R_seq(std::span<const double> mu, const CorrectionSettings& cfg) {
    CorrectionSettings c = cfg;
    if (!c.tail_v) c.tail_v = leading_amplitude(mu);
    std::vector<double> out(mu.size());
    for (std::size_t n = 0; n < mu.size(); ++n) out[n] = correction_R(mu, static_cast<int>(n), c);
    return out;
}

double correction_leading(double v, int n) {
    // v here multiplies (2m+1)^{-1/2}; in the (m+1)^{-1/2} normalization the amplitude is v/sqrt(2)
    const double w = v / std::numbers::sqrt2;
    return std::numbers::pi * std::numbers::pi * w * w / 48.0 / (n + 1.0);
}

std::vector<double> predict_r_seq(std::span<const double> qtilde, std::span<const double> mu,
                                  const CorrectionSettings& cfg) {
    if (qtilde.size() < mu.size()) throw input_error("qtilde shorter than mu");
    auto r = correction_R_seq(mu, cfg);
    for (std::size_t n = 0; n < r.size(); ++n) r[n] -= 2.0 * qtilde[n];
    return r;
}

std::vector<double> predict_r_seq(const Potential& q, std::span<const double> qtilde, std::span<const double> mu,
                                  CorrectionSettings cfg) {
    const std::size_t M = cfg.product_terms ? cfg.product_terms : 8 * mu.size();
    if (cfg.extension.empty() && M > mu.size()) {
        const auto qh = qhat_seq(q, 2 * M);
        for (std::size_t m = mu.size(); m < M; ++m) cfg.extension.push_back(2.0 * qh[2 * m + 1]);
    }
    return predict_r_seq(qtilde, mu, cfg);
}

double prediction_r(double nu, int n, double q0) { return 2.0 * (nu - nu0(n)) + q0 / (2.0 * (2.0 * n + 1.0)); }

double predict_logpsi_prime(double qcheck_odd, int n, double mu_n) {
    const auto k = kappa_set_scaled(n);
    return k.kappa_prime_dot / k.kappa_prime * mu_n - qcheck_odd;
}

ResidualReport make_residual_report(std::vector<double> residuals, std::size_t first, std::size_t last) {
    if (residuals.empty() || last >= residuals.size() || first > last) throw input_error("empty residual window");
    ResidualReport r;
    r.first = first;
    r.last = last;
    r.fitted_exponent = fitted_exponent(residuals, std::max<std::size_t>(first, 1), last);
    double s = 0.0;
    for (std::size_t n = 0; n < residuals.size(); ++n) {
        s += std::pow(1.0 + n, 1.5) * residuals[n] * residuals[n];
        r.weighted_norms.push_back(std::sqrt(s));
    }
    r.residuals = std::move(residuals);
    return r;
}

}  // namespace oscspec
