#include "oscspec/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "oscspec/errors.hpp"
#include "oscspec/specfun.hpp"

namespace oscspec {

namespace {

double dirichlet_indicator(const BoundaryData& b, double lambda) {
    const double w = std::sqrt(1.0 + std::abs(lambda));
    return b.value / std::hypot(b.value, b.deriv / w);
}

double neumann_indicator(const BoundaryData& b, double lambda) {
    const double w = std::sqrt(1.0 + std::abs(lambda));
    return b.deriv / std::hypot(b.value * w, b.deriv);
}

template <class F>
std::pair<double, double> refine(F&& f, double a, double b, double fa, double fb, const SpectralSettings& cfg,
                                 const char* what, int n) {
    if (fa == 0.0) return {a, a};
    if (fb == 0.0) return {b, b};
    if ((fa > 0.0) == (fb > 0.0)) {
        throw numerical_error(std::string(what) + " bracket lost its sign change at index " + std::to_string(n));
    }
    std::uintmax_t iters = 200;
    auto tol = [&](double x, double y) { return std::abs(x - y) <= cfg.root_tol * (1.0 + std::abs(x)); };
    return boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
}

}  // namespace

Eigenvalue dirichlet_eigenvalue(const Potential& q, int n, const SpectralSettings& cfg, std::optional<double> center) {
    if (n < 0) throw input_error("negative eigenvalue index");
    const double c = center ? *center : sigma0(n) + 2.0 * qhat(q, 2 * n + 1);
    const double top = max_lambda(q.grid());
    auto eval = [&](double lam) { return psi_plus_at_zero(q, lam, cfg.ode); };

    double a = c - 1.0, b = std::min(c + 1.0, top);
    auto ba = eval(a);
    auto bb = eval(b);
    double step = 2.0;
    for (int guard = 0; ba.nodes > n; ++guard) {
        if (guard > 60) throw numerical_error("Dirichlet bracket escaped below at index " + std::to_string(n));
        b = a;
        bb = ba;
        a -= step;
        step *= 2.0;
        ba = eval(a);
    }
    step = 2.0;
    for (int guard = 0; bb.nodes < n + 1; ++guard) {
        if (b >= top || guard > 60) {
            throw numerical_error("Dirichlet eigenvalue " + std::to_string(n) + " not found below lambda = " +
                                  std::to_string(top) + "; enlarge xmax");
        }
        a = b;
        ba = bb;
        b = std::min(b + step, top);
        step *= 2.0;
        bb = eval(b);
    }
    for (int guard = 0; !(ba.nodes == n && bb.nodes == n + 1); ++guard) {
        if (guard > 100) throw numerical_error("node-count bisection stalled at index " + std::to_string(n));
        const double m = 0.5 * (a + b);
        const auto bm = eval(m);
        if (bm.nodes <= n) {
            a = m;
            ba = bm;
        } else {
            b = m;
            bb = bm;
        }
    }
    auto f = [&](double lam) { return dirichlet_indicator(eval(lam), lam); };
    const auto [lo, hi] = refine(f, a, b, dirichlet_indicator(ba, a), dirichlet_indicator(bb, b), cfg, "Dirichlet", n);
    return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

std::vector<Eigenvalue> dirichlet_spectrum(const Potential& q, int count, const SpectralSettings& cfg) {
    std::vector<Eigenvalue> out;
    out.reserve(count);
    const auto qh = qhat_seq(q, 2 * static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) out.push_back(dirichlet_eigenvalue(q, n, cfg, sigma0(n) + 2.0 * qh[2 * n + 1]));
    return out;
}

std::vector<double> neumann_spectrum(const Potential& q, std::span<const double> dirichlet, const SpectralSettings& cfg) {
    auto eval = [&](double lam) { return psi_plus_at_zero(q, lam, cfg.ode); };
    auto f = [&](double lam) { return neumann_indicator(eval(lam), lam); };
    std::vector<double> out;
    out.reserve(dirichlet.size());
    for (std::size_t n = 0; n < dirichlet.size(); ++n) {
        const double hi = dirichlet[n];
        double b = hi - 1e-6 * (1.0 + std::abs(hi));
        double fb = f(b);
        double a, fa;
        if (n == 0) {
            double step = 2.0;
            a = hi - step;
            auto ba = eval(a);
            fa = neumann_indicator(ba, a);
            for (int guard = 0; ba.nodes > 0 || (fa > 0.0) == (fb > 0.0); ++guard) {
                if (guard > 60) throw numerical_error("lowest even eigenvalue not bracketed");
                step *= 2.0;
                a = hi - step;
                ba = eval(a);
                fa = neumann_indicator(ba, a);
            }
        } else {
            const double lo = dirichlet[n - 1];
            a = lo + 1e-6 * (1.0 + std::abs(lo));
            fa = f(a);
        }
        const auto [x0, x1] = refine(f, a, b, fa, fb, cfg, "Neumann", static_cast<int>(n));
        out.push_back(0.5 * (x0 + x1));
    }
    return out;
}

double neumann_eigenvalue(const Potential& q, int n, const SpectralSettings& cfg) {
    if (n < 0) throw input_error("negative eigenvalue index");
    std::vector<double> d;
    for (int m = 0; m <= n; ++m) d.push_back(dirichlet_eigenvalue(q, m, cfg).value);
    return neumann_spectrum(q, d, cfg).back();
}

BoundaryData psi_plus_dlambda(const Potential& q, double lambda, const SpectralSettings& cfg) {
    const double delta = cfg.fd_step * std::sqrt(1.0 + std::abs(lambda));
    const double ref = psi_plus0_boundary_scaled(lambda).log_scale;
    constexpr std::array<double, 4> offsets{-2.0, -1.0, 1.0, 2.0};
    constexpr std::array<double, 4> weights{1.0, -8.0, 8.0, -1.0};
    double dv = 0.0, dd = 0.0;
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        const auto b = psi_plus_at_zero(q, lambda + offsets[k] * delta, cfg.ode);
        const double f = std::exp(b.log_scale - ref);
        dv += weights[k] * b.value * f;
        dd += weights[k] * b.deriv * f;
    }
    BoundaryData out;
    out.value = dv / (12.0 * delta);
    out.deriv = dd / (12.0 * delta);
    out.log_scale = ref;
    return out;
}

EigenData solve_eigen(const Potential& q, int n, double sigma, const EigenRequest& req, const SpectralSettings& cfg) {
    EigenData e;
    e.n = n;
    e.sigma = sigma;
    const auto tr = solve_psi_plus(q, sigma, cfg.ode);
    const double mass = tr.tail_mass[0];
    if (!(mass > 0.0)) throw numerical_error("eigenfunction normalization failed at index " + std::to_string(n));
    const double sgn = tr.dpsi[0] > 0.0 ? 1.0 : -1.0;
    const double scale = sgn / std::sqrt(mass);
    e.psi = tr;
    e.psi.log_scale = 0.0;
    e.psi.tail_mass.clear();
    e.tail.resize(tr.psi.size());
    for (std::size_t i = 0; i < tr.psi.size(); ++i) {
        e.psi.psi[i] = tr.psi[i] * scale;
        e.psi.dpsi[i] = tr.dpsi[i] * scale;
        e.tail[i] = tr.tail_mass[i] / mass;
    }
    e.dpsi0 = e.psi.dpsi[0];
    e.boundary = {tr.psi[0], tr.dpsi[0], tr.log_scale, tr.nodes};
    e.log_abs_dpsi_plus = std::log(std::abs(tr.dpsi[0])) + tr.log_scale;
    e.nu = 2.0 * std::log(e.dpsi0);

    if (req.route_b || req.chi) {
        e.dlambda = psi_plus_dlambda(q, sigma, cfg);
        const double ratio = -tr.dpsi[0] / e.dlambda.value;
        e.nu_route_b = ratio > 0.0 ? std::log(ratio) + tr.log_scale - e.dlambda.log_scale
                                   : std::numeric_limits<double>::quiet_NaN();
    }
    if (req.chi) {
        const auto pt = solve_from_zero(q, sigma, cfg.ode);
        e.theta = pt.theta.values();
        const auto dtheta = pt.theta.derivs();
        const double c = e.dlambda.deriv / tr.dpsi[0] * std::exp(e.dlambda.log_scale - tr.log_scale);
        e.chi.resize(e.theta.size());
        e.dchi.resize(e.theta.size());
        for (std::size_t i = 0; i < e.theta.size(); ++i) {
            e.chi[i] = e.theta[i] / e.dpsi0 - c * e.psi.psi[i];
            e.dchi[i] = dtheta[i] / e.dpsi0 - c * e.psi.dpsi[i];
        }
    }
    return e;
}

SolutionTrace eigenfunction(const Potential& q, int n, double sigma, const SpectralSettings& cfg) {
    return solve_eigen(q, n, sigma, {.chi = false, .route_b = false}, cfg).psi;
}

NormingConstant norming_constant(const Potential& q, int n, double sigma, const SpectralSettings& cfg) {
    const auto e = solve_eigen(q, n, sigma, {.chi = false, .route_b = true}, cfg);
    return {e.nu, std::abs(e.nu - e.nu_route_b)};
}

ChiTrace chi_nd(const Potential& q, int n, double sigma, const SpectralSettings& cfg) {
    auto e = solve_eigen(q, n, sigma, {.chi = true, .route_b = true}, cfg);
    return {std::move(e.chi), std::move(e.dchi)};
}

std::vector<double> grad_sigma(const EigenData& e) { return multiply(e.psi.psi, e.psi.psi); }

std::vector<double> grad_log_dpsi_plus(const EigenData& e) {
    if (e.chi.empty()) throw input_error("gradient needs chi_{n,D}; request it in solve_eigen");
    std::vector<double> g(e.chi.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = -e.psi.psi[i] * e.chi[i];
    return g;
}

std::vector<double> grad_nu(const EigenData& e) {
    if (e.theta.empty()) throw input_error("gradient needs theta; request chi in solve_eigen");
    const std::size_t n = e.theta.size();
    const double h = e.psi.grid.h();
    const auto& psi = e.psi.psi;
    const auto s = cumulative_integral(multiply(psi, e.theta), h);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = psi[i] * (e.theta[i] * e.tail[i] + psi[i] * s[i]) / e.dpsi0;
    const double mean = simpson(u, h);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = -2.0 * (u[i] - mean * psi[i] * psi[i]);
    return g;
}

namespace {

std::array<double, 5> product_series(double l) {
    const double l2 = l * l;
    return {-0.5, -l / 4.0, -(3.0 * l2 + 3.0) / 16.0, -5.0 * l * (l2 + 5.0) / 32.0,
            -(35.0 * l2 * l2 / 256.0 + 245.0 * l2 / 128.0 + 315.0 / 256.0)};
}

}  // namespace

double psi_chi_asymptotic(double lambda, double x) {
    const auto p = product_series(lambda);
    double s = 0.0, xp = 1.0 / x;
    const double inv2 = 1.0 / (x * x);
    for (double c : p) {
        s += c * xp;
        xp *= inv2;
    }
    return s;
}

double psi_chi_tail_overlap(double lambda_a, double lambda_b, double x) {
    const auto a = product_series(lambda_a);
    const auto b = product_series(lambda_b);
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double e = 2.0 * static_cast<double>(k + j) + 2.0;
            s += -(2.0 * k + 1.0) * a[k] * b[j] * std::pow(x, -e) / e;
        }
    }
    return s;
}

OrthogonalityProducts orthogonality_products(std::span<const EigenData> eig) {
    const std::size_t N = eig.size();
    OrthogonalityProducts out;
    if (N == 0) return out;
    const Grid& g = eig[0].psi.grid;
    const double h = g.h();
    std::vector<std::vector<double>> sq(N), dsq(N), pc(N), dpc(N);
    for (std::size_t n = 0; n < N; ++n) {
        const auto& e = eig[n];
        if (e.chi.empty()) throw input_error("orthogonality products need chi in the eigen data");
        const std::size_t len = e.chi.size();
        sq[n].resize(len);
        dsq[n].resize(len);
        pc[n].resize(len);
        dpc[n].resize(len);
        for (std::size_t i = 0; i < len; ++i) {
            const double p = e.psi.psi[i], dp = e.psi.dpsi[i];
            sq[n][i] = p * p;
            dsq[n][i] = 2.0 * p * dp;
            pc[n][i] = p * e.chi[i];
            dpc[n][i] = dp * e.chi[i] + p * e.dchi[i];
        }
    }
    auto table = [&](const auto& a, const auto& b) {
        std::vector<std::vector<double>> m(N, std::vector<double>(N));
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t k = 0; k < N; ++k) m[n][k] = simpson(multiply(a[n], b[k]), h);
        return m;
    };
    out.sq_sq = table(dsq, sq);
    out.sq_pc = table(dsq, pc);
    out.pc_pc = table(dpc, pc);
    out.pc_sq = table(dpc, sq);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t k = 0; k < N; ++k)
            out.pc_pc[n][k] += psi_chi_tail_overlap(eig[n].sigma, eig[k].sigma, g.xmax());
    return out;
}

double r_from_nu(double nu, int n, double q0) { return nu - nu0(n) + q0 / (2.0 * (2.0 * n + 1.0)); }

SpectralDataSet make_dataset(std::vector<double> sigma, std::vector<double> nu, double q0) {
    if (sigma.size() != nu.size()) throw input_error("sigma and nu lengths differ");
    SpectralDataSet d;
    d.N = static_cast<int>(sigma.size());
    d.q0 = q0;
    d.mu.resize(sigma.size());
    d.r.resize(sigma.size());
    for (int n = 0; n < d.N; ++n) {
        d.mu[n] = sigma[n] - sigma0(n);
        d.r[n] = r_from_nu(nu[n], n, q0);
    }
    d.sigma = std::move(sigma);
    d.nu = std::move(nu);
    d.quality.assign(d.sigma.size(), 0.0);
    return d;
}

SpectralDataSet spectral_data(const Potential& q, int N, bool with_neumann, const SpectralSettings& cfg) {
    const auto eig = dirichlet_spectrum(q, N, cfg);
    std::vector<double> sigma(N), nu(N), quality(N);
    for (int n = 0; n < N; ++n) {
        sigma[n] = eig[n].value;
        if (n > 0 && !(sigma[n] > sigma[n - 1])) {
            throw numerical_error("Dirichlet eigenvalues not increasing at index " + std::to_string(n));
        }
        const auto e = solve_eigen(q, n, sigma[n], {.chi = false, .route_b = true}, cfg);
        nu[n] = e.nu;
        quality[n] = std::max(eig[n].error, std::abs(e.nu - e.nu_route_b));
    }
    auto d = make_dataset(sigma, nu, q.q0());
    d.quality = std::move(quality);
    if (with_neumann) d.neumann = neumann_spectrum(q, d.sigma, cfg);
    return d;
}

}  // namespace oscspec
