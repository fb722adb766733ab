#include "oscspec/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "oscspec/detail/shoot.hpp"
#include "oscspec/errors.hpp"
#include "oscspec/specfun.hpp"

namespace oscspec {

struct Potential::Interp {
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
    double xmax;
};

namespace {

const double quarter_root_two = std::pow(2.0, 0.25);

void check_finite(std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw input_error("non-finite potential sample at index " + std::to_string(i));
    }
}

}  // namespace

Potential::Potential(Grid grid, std::vector<double> values, std::optional<std::vector<double>> hermite)
    : grid_(grid), values_(std::move(values)), hermite_(std::move(hermite)) {
    if (values_.size() != grid_.size()) throw input_error("sample count does not match grid");
    check_finite(values_);
    double peak = 0.0;
    for (double v : values_) peak = std::max(peak, std::abs(v));
    zero_ = peak == 0.0;
    if (std::abs(values_.back()) >= 1e-8 * (1.0 + peak)) {
        throw input_error("potential is not negligible at xmax = " + std::to_string(grid_.xmax()));
    }
    if (!zero_) {
        interp_ = std::make_shared<const Interp>(
            Interp{boost::math::interpolators::cardinal_cubic_b_spline<double>(values_.data(), values_.size(),
                                                                               0.0, grid_.h()),
                   grid_.xmax()});
    }
}

Potential Potential::from_samples(std::vector<double> samples, double h) {
    if (samples.size() < 8) throw input_error("need at least 8 potential samples");
    if (!(h > 0.0)) throw input_error("step must be positive");
    if ((samples.size() - 1) % 2 == 1) samples.push_back(0.0);
    Grid grid(h * static_cast<double>(samples.size() - 1), h);
    return Potential(grid, std::move(samples), std::nullopt);
}

Potential Potential::from_samples(std::vector<double> samples, const Grid& grid) {
    return Potential(grid, std::move(samples), std::nullopt);
}

Potential Potential::from_hermite(std::vector<double> coeffs, const Grid& grid) {
    std::vector<double> values(grid.size(), 0.0);
    const std::size_t orders = 2 * coeffs.size();
    if (orders > 0) {
        std::vector<double> v(orders), d(orders);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            psi0_all(std::numbers::sqrt2 * grid.x(i), v, d);
            double s = 0.0;
            for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * v[2 * k];
            values[i] = quarter_root_two * s;
        }
    }
    return Potential(grid, std::move(values), std::move(coeffs));
}

Potential Potential::from_function(const std::function<double(double)>& f, const Grid& grid) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid.x(i));
    return Potential(grid, std::move(values), std::nullopt);
}

Potential Potential::zero(const Grid& grid) {
    return Potential(grid, std::vector<double>(grid.size(), 0.0), std::vector<double>{});
}

double Potential::operator()(double x) const {
    if (zero_) return 0.0;
    const double ax = std::abs(x);
    if (ax >= interp_->xmax) return 0.0;
    return interp_->spline(ax);
}

Potential Potential::scaled(double a) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= a;
    std::optional<std::vector<double>> h;
    if (hermite_) {
        h = *hermite_;
        for (double& c : *h) c *= a;
    }
    return Potential(grid_, std::move(v), std::move(h));
}

Potential Potential::combine(double a, const Potential& p, double b, const Potential& r) {
    if (!(p.grid() == r.grid())) throw input_error("potentials live on different grids");
    std::vector<double> v(p.values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * p.values_[i] + b * r.values_[i];
    std::optional<std::vector<double>> h;
    if (p.hermite_ && r.hermite_) {
        std::vector<double> c(std::max(p.hermite_->size(), r.hermite_->size()), 0.0);
        for (std::size_t k = 0; k < p.hermite_->size(); ++k) c[k] += a * (*p.hermite_)[k];
        for (std::size_t k = 0; k < r.hermite_->size(); ++k) c[k] += b * (*r.hermite_)[k];
        h = std::move(c);
    }
    return Potential(p.grid_, std::move(v), std::move(h));
}

double inner_plus(const Potential& q, std::span<const double> f) {
    const auto w = simpson_weights(q.grid().size(), q.grid().h());
    const auto v = q.values();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * f[i];
    return s;
}

std::vector<double> qhat_seq(const Potential& q, std::size_t count) {
    std::vector<double> out(count, 0.0);
    if (q.is_zero() || count == 0) return out;
    const Grid& g = q.grid();
    const auto w = simpson_weights(g.size(), g.h());
    const auto v = q.values();
    std::vector<double> psi(count), dpsi(count);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (v[i] == 0.0) continue;
        psi0_all(g.x(i), psi, dpsi);
        const double wq = w[i] * v[i];
        for (std::size_t k = 0; k < count; ++k) out[k] += wq * psi[k] * psi[k];
    }
    return out;
}

double qhat(const Potential& q, int n) {
    if (n < 0) throw input_error("negative index");
    return qhat_seq(q, static_cast<std::size_t>(n) + 1).back();
}

namespace {

// chi_n^0 mantissas on the grid with one common log scale.
struct ChiTrace {
    std::vector<double> value;
    double log_scale = 0.0;
};

ChiTrace chi0_trace(int n, const Grid& grid) {
    const auto p = psi0(n, 0.0);
    detail::ShootState st;
    if (n % 2 == 0) {
        st.s = {0.0, -1.0 / p.value, 0.0, 0.0, 0.0};
    } else {
        st.s = {1.0 / p.deriv, 0.0, 0.0, 0.0, 0.0};
    }
    const auto xs = grid.points();
    std::vector<double> raw(grid.size());
    std::vector<double> scales(grid.size(), 0.0);
    raw[0] = st.s[0];
    detail::shoot([](double) { return 0.0; }, 2.0 * n + 1.0, st, 0.0, std::span(xs).subspan(1),
                  detail::ShootSettings{}, [&](std::size_t k, const detail::ShootState& s) {
                      raw[k + 1] = s.s[0];
                      scales[k + 1] = s.log_scale;
                  });
    ChiTrace t;
    t.log_scale = st.log_scale;
    t.value.resize(grid.size());
    for (std::size_t i = 0; i < raw.size(); ++i) t.value[i] = raw[i] * std::exp(scales[i] - t.log_scale);
    return t;
}

}  // namespace

std::vector<double> psi_chi0_on_grid(int n, const Grid& grid) {
    const auto chi = chi0_trace(n, grid);
    std::vector<double> out(grid.size());
    std::vector<double> psi(n + 1), dpsi(n + 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        psi0_all(grid.x(i), psi, dpsi);
        const double p = psi[n];
        out[i] = p == 0.0 ? 0.0 : p * chi.value[i] * std::exp(chi.log_scale);
    }
    return out;
}

std::vector<double> qcheck_seq(const Potential& q, std::size_t count) {
    std::vector<double> out(count, 0.0);
    if (q.is_zero() || count == 0) return out;
    const Grid& g = q.grid();
    const auto w = simpson_weights(g.size(), g.h());
    const auto v = q.values();
    std::vector<std::vector<double>> table(count, std::vector<double>(g.size()));
    std::vector<double> psi(count), dpsi(count);
    for (std::size_t i = 0; i < g.size(); ++i) {
        psi0_all(g.x(i), psi, dpsi);
        for (std::size_t k = 0; k < count; ++k) table[k][i] = psi[k];
    }
    for (std::size_t k = 0; k < count; ++k) {
        const auto chi = chi0_trace(static_cast<int>(k), g);
        const double f = std::exp(chi.log_scale);
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (v[i] == 0.0) continue;
            s += w[i] * v[i] * table[k][i] * chi.value[i] * f;
        }
        out[k] = s;
    }
    return out;
}

double qcheck(const Potential& q, int n) {
    if (n < 0) throw input_error("negative index");
    if (q.is_zero()) return 0.0;
    return inner_plus(q, psi_chi0_on_grid(n, q.grid()));
}

std::vector<std::vector<double>> scaled_hermite_table(const Grid& grid, std::size_t count) {
    std::vector<std::vector<double>> table(count, std::vector<double>(grid.size()));
    std::vector<double> psi(count), dpsi(count);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        psi0_all(std::numbers::sqrt2 * grid.x(i), psi, dpsi);
        for (std::size_t j = 0; j < count; ++j) table[j][i] = quarter_root_two * psi[j];
    }
    return table;
}

std::vector<double> scaled_hermite_products(const Potential& q, std::size_t count) {
    std::vector<double> out(count, 0.0);
    if (q.is_zero() || count == 0) return out;
    const Grid& g = q.grid();
    const auto w = simpson_weights(g.size(), g.h());
    const auto v = q.values();
    std::vector<double> psi(count), dpsi(count);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (v[i] == 0.0) continue;
        psi0_all(std::numbers::sqrt2 * g.x(i), psi, dpsi);
        const double wq = w[i] * v[i] * quarter_root_two;
        for (std::size_t j = 0; j < count; ++j) out[j] += wq * psi[j];
    }
    return out;
}

double hplus_norm(const Potential& q) {
    const Grid& g = q.grid();
    const auto v = q.values();
    const auto d = derivative(v, g.h());
    std::vector<double> integrand(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = g.x(i);
        integrand[i] = v[i] * v[i] * (1.0 + x * x) + d[i] * d[i];
    }
    return std::sqrt(simpson(integrand, g.h()));
}

double l2_distance(const Potential& a, const Potential& b) {
    if (!(a.grid() == b.grid())) throw input_error("potentials live on different grids");
    std::vector<double> diff(a.values().size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
        const double d = a.values()[i] - b.values()[i];
        diff[i] = d * d;
    }
    return std::sqrt(simpson(diff, a.grid().h()));
}

}  // namespace oscspec
