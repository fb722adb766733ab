#include "oscspec/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "oscspec/detail/shoot.hpp"
#include "oscspec/errors.hpp"

namespace oscspec {

namespace {

detail::ShootSettings shoot_settings(const OdeSettings& cfg) {
    detail::ShootSettings s;
    s.rtol = cfg.rtol;
    s.atol = cfg.atol;
    return s;
}

void check_lambda(const Grid& grid, double lambda) {
    if (!std::isfinite(lambda) || lambda > max_lambda(grid)) {
        throw input_error("lambda = " + std::to_string(lambda) + " is beyond what xmax = " +
                          std::to_string(grid.xmax()) + " resolves");
    }
}

SolutionTrace forward_trace(const Potential& q, double lambda, double y0, double dy0, TraceKind kind,
                            const OdeSettings& cfg) {
    const Grid& g = q.grid();
    const auto xs = g.points();
    SolutionTrace t;
    t.kind = kind;
    t.lambda = lambda;
    t.grid = g;
    t.psi.assign(g.size(), 0.0);
    t.dpsi.assign(g.size(), 0.0);
    std::vector<double> scales(g.size(), 0.0);
    t.psi[0] = y0;
    t.dpsi[0] = dy0;
    detail::ShootState st;
    st.s = {y0, dy0, 0.0, 0.0, 0.0};
    detail::shoot(q, lambda, st, 0.0, std::span(xs).subspan(1), shoot_settings(cfg),
                  [&](std::size_t k, const detail::ShootState& s) {
                      t.psi[k + 1] = s.s[0];
                      t.dpsi[k + 1] = s.s[1];
                      scales[k + 1] = s.log_scale;
                  });
    t.log_scale = st.log_scale;
    t.renormalizations = st.renormalizations;
    t.nodes = st.sign_changes;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double f = std::exp(scales[i] - t.log_scale);
        t.psi[i] *= f;
        t.dpsi[i] *= f;
    }
    return t;
}

// Normalization mantissa c with psi_true = c * raw * exp(closed.log_scale - raw_log_scale).
double normalization(const ScaledPair& closed, double ref, double dref, double lambda) {
    const double w2 = 1.0 + std::abs(lambda);
    const double num = closed.value * ref + closed.deriv * dref / w2;
    const double den = ref * ref + dref * dref / w2;
    if (!(den > 0.0)) throw numerical_error("reference solution vanished at x = 0");
    return num / den;
}

// psi'/psi of the decaying q = 0 solution at x: Riccati equation integrated inwards from x + 10,
// where any seed error dies out like exp(-2 int sqrt(t^2 - lambda)).
double decaying_log_derivative(double x, double lambda) {
    const double far = x + 10.0;
    const double Q = far * far - lambda;
    double w = -std::sqrt(Q) - far / (2.0 * Q);
    auto rhs = [lambda](const double& y, double& dy, double t) { dy = t * t - lambda - y * y; };
    namespace odeint = boost::numeric::odeint;
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<double>>(1e-13, 1e-13), rhs, w, far,
                               x, -0.01);
    return w;
}

std::array<double, 5> seed(double x, double lambda) {
    const double slope = decaying_log_derivative(x, lambda);
    return {1.0, slope, 1.0, slope, 0.0};
}

}  // namespace

double max_lambda(const Grid& grid) {
    const double r = grid.xmax() - 3.0;
    return r > 0.0 ? r * r : 0.0;
}

std::vector<double> SolutionTrace::values() const {
    std::vector<double> v(psi.size());
    const double f = std::exp(log_scale);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = psi[i] * f;
    return v;
}

std::vector<double> SolutionTrace::derivs() const {
    std::vector<double> v(dpsi.size());
    const double f = std::exp(log_scale);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = dpsi[i] * f;
    return v;
}

PhiTheta solve_from_zero(const Potential& q, double lambda, const OdeSettings& cfg) {
    check_lambda(q.grid(), lambda);
    return {forward_trace(q, lambda, 0.0, 1.0, TraceKind::phi, cfg),
            forward_trace(q, lambda, 1.0, 0.0, TraceKind::theta, cfg)};
}

BoundaryData psi_plus_at_zero(const Potential& q, double lambda, const OdeSettings& cfg) {
    const Grid& g = q.grid();
    check_lambda(g, lambda);
    const double xstart = g.xmax();
    detail::ShootState st;
    st.s = seed(xstart, lambda);
    const std::array<double, 1> stops{0.0};
    detail::shoot(q, lambda, st, xstart, stops, shoot_settings(cfg), [](std::size_t, const detail::ShootState&) {});
    const auto closed = psi_plus0_boundary_scaled(lambda);
    const double c = normalization(closed, st.s[2], st.s[3], lambda);
    BoundaryData b;
    b.value = c * st.s[0];
    b.deriv = c * st.s[1];
    b.log_scale = closed.log_scale;
    b.nodes = st.sign_changes;
    return b;
}

SolutionTrace solve_psi_plus(const Potential& q, double lambda, const OdeSettings& cfg) {
    const Grid& g = q.grid();
    check_lambda(g, lambda);
    const std::size_t n = g.size();
    std::vector<double> stops(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) stops[i] = g.x(n - 2 - i);

    SolutionTrace t;
    t.kind = TraceKind::psi_plus;
    t.lambda = lambda;
    t.grid = g;
    t.psi.assign(n, 0.0);
    t.dpsi.assign(n, 0.0);
    t.tail_mass.assign(n, 0.0);
    std::vector<double> scales(n, 0.0);

    detail::ShootState st;
    st.s = seed(g.xmax(), lambda);
    t.psi[n - 1] = st.s[0];
    t.dpsi[n - 1] = st.s[1];
    detail::shoot(q, lambda, st, g.xmax(), stops, shoot_settings(cfg),
                  [&](std::size_t k, const detail::ShootState& s) {
                      const std::size_t i = n - 2 - k;
                      t.psi[i] = s.s[0];
                      t.dpsi[i] = s.s[1];
                      t.tail_mass[i] = -s.s[4];
                      scales[i] = s.log_scale;
                  });
    const auto closed = psi_plus0_boundary_scaled(lambda);
    const double c = normalization(closed, st.s[2], st.s[3], lambda);
    t.log_scale = closed.log_scale;
    t.renormalizations = st.renormalizations;
    t.nodes = st.sign_changes;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = c * std::exp(scales[i] - st.log_scale);
        t.psi[i] *= f;
        t.dpsi[i] *= f;
        t.tail_mass[i] *= f * f;
    }
    return t;
}

ValueDeriv iteration_term(const Potential& q, double lambda, int k, const OdeSettings& cfg) {
    if (k < 1) throw input_error("iteration order must be >= 1");
    if (q.is_zero()) return {0.0, 0.0};
    const Grid& g = q.grid();
    const auto zero = Potential::zero(g);
    const auto pt = solve_from_zero(zero, lambda, cfg);
    const auto phi = pt.phi.values();
    const auto theta = pt.theta.values();
    auto u = solve_psi_plus(zero, lambda, cfg).values();
    const auto qv = q.values();
    const std::size_t n = g.size();
    double at0 = 0.0, dat0 = 0.0;
    for (int j = 1; j <= k; ++j) {
        std::vector<double> fa(n), fb(n);
        for (std::size_t i = 0; i < n; ++i) {
            fa[i] = theta[i] * u[i] * qv[i];
            fb[i] = phi[i] * u[i] * qv[i];
        }
        const auto ca = cumulative_integral(fa, g.h());
        const auto cb = cumulative_integral(fb, g.h());
        const double ta = ca.back(), tb = cb.back();
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = -phi[i] * (ta - ca[i]) + theta[i] * (tb - cb[i]);
        at0 = tb;
        dat0 = -ta;
        u = std::move(next);
    }
    return {at0, dat0};
}

}  // namespace oscspec
