#include "oscspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "oscspec/asymptotics.hpp"
#include "oscspec/errors.hpp"
#include "oscspec/inverse.hpp"
#include "oscspec/seqspace.hpp"
#include "oscspec/specfun.hpp"

namespace oscspec {

AsymptoticResiduals asymptotic_residuals(const Potential& q, int N, const SpectralSettings& cfg) {
    const auto d = spectral_data(q, N, false, cfg);
    const auto ps = predict_sigma_seq(q, static_cast<std::size_t>(N));
    const auto qt = tilde_n(q, static_cast<std::size_t>(N)).coeffs;
    const auto pr = predict_r_seq(q, qt, d.mu);
    const auto qc = qcheck_seq(q, 2 * static_cast<std::size_t>(N));
    AsymptoticResiduals out;
    for (int n = 0; n < N; ++n) {
        out.sigma.push_back(d.sigma[n] - ps[n]);
        out.r.push_back(prediction_r(d.nu[n], n, d.q0) - pr[n]);
        const auto e = solve_eigen(q, n, d.sigma[n], {.chi = false, .route_b = false}, cfg);
        const auto k = kappa_set(n);
        out.logpsi.push_back(e.log_abs_dpsi_plus - std::log(std::abs(k.kappa_prime)) -
                             predict_logpsi_prime(qc[2 * n + 1], n, d.mu[n]));
    }
    return out;
}

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Slope check; residuals at round-off level count as decayed.
IdentityCheck slope_check(std::string name, std::span<const double> res, double bound) {
    const std::size_t last = res.size() - 1;
    if (res.size() < 8 || max_abs(res.subspan(4)) < 1e-7) return {std::move(name), bound - 1.0, bound};
    return {std::move(name), fitted_exponent(res, 4, last), bound};
}

}  // namespace

std::vector<IdentityCheck> run_verification(const Potential& q, const RunConfig& cfg,
                                            const std::optional<SpectralDataSet>& data) {
    std::vector<IdentityCheck> out;
    const int N = cfg.N;
    const auto computed = spectral_data(q, N, true);
    const auto& use = data ? *data : computed;
    if (use.N < N) throw input_error("spectral data has N = " + std::to_string(use.N) + " < " + std::to_string(N));

    {
        double gap = 0.0, route = 0.0;
        for (int n = 0; n < N; ++n) {
            gap = std::max(gap, std::abs(use.sigma[n] - computed.sigma[n]));
            route = std::max(route, computed.quality[n]);
        }
        out.push_back({"spectrum matches forward solve", gap, cfg.tol("spectrum")});
        out.push_back({"norming constant routes agree", route, cfg.tol("nu_routes")});
    }
    {
        if (!use.neumann) throw input_error("trace check needs the Neumann spectrum");
        const auto tr = trace_q0(std::span(use.sigma).first(N), std::span(*use.neumann).first(N));
        out.push_back({"trace formula q(0) from interlaced spectra", std::abs(tr.q0 - q.q0()),
                       cfg.tol("trace") * (1.0 + std::abs(q.q0()))});
        std::vector<double> odd(N);
        const auto qh = qhat_seq(q, 2 * static_cast<std::size_t>(N));
        for (int n = 0; n < N; ++n) odd[n] = qh[2 * n + 1];
        const auto res = trace_residual(std::span(use.sigma).first(N), odd);
        out.push_back({"sum of sigma remainders vanishes (within tail envelope)", std::abs(res.defect),
                       std::max(res.envelope, 1e-10)});
    }
    {
        IdentitySettings is;
        is.count = static_cast<std::size_t>(std::min(cfg.K, 12));
        is.extension = static_cast<std::size_t>(cfg.M);
        is.tolerance = cfg.tol("identity");
        for (auto& c : coefficient_identities(q, is)) {
            c.name = "identity: " + c.name;
            out.push_back(std::move(c));
        }
    }
    {
        const auto res = asymptotic_residuals(q, N);
        out.push_back(slope_check("sigma remainder decay exponent", res.sigma, cfg.tol("slope")));
        out.push_back(slope_check("r remainder decay exponent", res.r, cfg.tol("slope")));
        out.push_back(slope_check("log psi_+' remainder decay exponent", res.logpsi, cfg.tol("slope")));
    }
    {
        // finite differences along random smooth directions
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        const int top = std::min(N, 4);
        const double eps = 1e-4;
        double err_sigma = 0.0, err_nu = 0.0;
        for (int dir = 0; dir < 2; ++dir) {
            std::vector<double> c(4);
            for (double& x : c) x = 0.1 * normal(rng);
            const auto dq = Potential::from_hermite(c, q.grid());
            const auto plus = Potential::combine(1.0, q, eps, dq);
            const auto minus = Potential::combine(1.0, q, -eps, dq);
            const auto dp = spectral_data(plus, top), dm = spectral_data(minus, top);
            for (int n = 0; n < top; ++n) {
                const auto e = solve_eigen(q, n, computed.sigma[n], {.chi = true, .route_b = false});
                const double gs = simpson(multiply(grad_sigma(e), dq.values()), q.grid().h());
                const double gn = simpson(multiply(grad_nu(e), dq.values()), q.grid().h());
                const double fs = (dp.sigma[n] - dm.sigma[n]) / (2.0 * eps);
                const double fn = (dp.nu[n] - dm.nu[n]) / (2.0 * eps);
                err_sigma = std::max(err_sigma, std::abs(gs - fs) / (1e-3 + std::abs(fs)));
                err_nu = std::max(err_nu, std::abs(gn - fn) / (1e-3 + std::abs(fn)));
            }
        }
        out.push_back({"sigma gradient vs finite differences", err_sigma, cfg.tol("gradient_sigma")});
        out.push_back({"nu gradient vs finite differences", err_nu, cfg.tol("gradient_nu")});
    }
    {
        const int top = std::min(N, 6);
        std::vector<EigenData> eig;
        for (int n = 0; n < top; ++n) eig.push_back(solve_eigen(q, n, computed.sigma[n], {.chi = true, .route_b = false}));
        const auto p = orthogonality_products(eig);
        double e1 = 0, e2 = 0, e3 = 0, e4 = 0;
        for (int n = 0; n < top; ++n)
            for (int m = 0; m < top; ++m) {
                const double d = n == m ? 0.5 : 0.0;
                e1 = std::max(e1, std::abs(p.sq_sq[n][m]));
                e2 = std::max(e2, std::abs(p.sq_pc[n][m] - d));
                e3 = std::max(e3, std::abs(p.pc_pc[n][m]));
                e4 = std::max(e4, std::abs(p.pc_sq[n][m] + d));
            }
        const double tol = cfg.tol("orthogonality");
        out.push_back({"orthogonality (psi^2)' vs psi^2", e1, tol});
        out.push_back({"orthogonality (psi^2)' vs psi chi", e2, tol});
        out.push_back({"orthogonality (psi chi)' vs psi chi", e3, tol});
        out.push_back({"orthogonality (psi chi)' vs psi^2", e4, tol});
    }
    return out;
}

}  // namespace oscspec
