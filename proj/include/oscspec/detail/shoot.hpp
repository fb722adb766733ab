#pragma once

// Adaptive Dormand–Prince integration of y'' = (x^2 + q(x) - lambda) y.
// The state carries a q = 0 reference copy (used to pin the normalization of
// decaying solutions) and the running integral of y^2.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "oscspec/errors.hpp"

namespace oscspec::detail {

using State = std::array<double, 5>;  // y, y', y_ref, y_ref', mass

struct ShootSettings {
    double rtol = 1e-10;
    double atol = 1e-12;
    double renorm_threshold = 1e100;
    long max_steps = 5'000'000;
};

struct ShootState {
    State s{};
    double log_scale = 0.0;  // true (y, y', y_ref, y_ref') = s * exp(log_scale), mass * exp(2 log_scale)
    int sign_changes = 0;    // sign changes of y seen along the way
    int renormalizations = 0;
};

// Integrates from x0 through every point of `stops` (monotone, on one side of x0),
// calling visit(k, state) at stop k.
template <class Q, class Visit>
void shoot(const Q& q, double lambda, ShootState& st, double x0, std::span<const double> stops,
           const ShootSettings& cfg, Visit&& visit) {
    namespace odeint = boost::numeric::odeint;
    using Stepper = odeint::runge_kutta_dopri5<State>;
    auto stepper = odeint::make_controlled<Stepper>(cfg.atol, cfg.rtol);

    auto rhs = [&](const State& s, State& d, double x) {
        const double w0 = x * x - lambda;
        d[0] = s[1];
        d[1] = (w0 + q(x)) * s[0];
        d[2] = s[3];
        d[3] = w0 * s[2];
        d[4] = s[0] * s[0];
    };

    if (stops.empty()) return;
    const double dir = stops.back() >= x0 ? 1.0 : -1.0;
    double x = x0;
    double dt = dir * 0.05 / (1.0 + std::sqrt(std::abs(lambda) + x0 * x0));
    long steps = 0;

    for (std::size_t k = 0; k < stops.size(); ++k) {
        const double target = stops[k];
        while (dir * (target - x) > 0.0) {
            const double remaining = target - x;
            const bool clip = std::abs(dt) >= std::abs(remaining);
            double dt_try = clip ? remaining : dt;
            const double before = st.s[0];
            const auto res = stepper.try_step(rhs, st.s, x, dt_try);
            if (++steps > cfg.max_steps) {
                throw numerical_error("step budget exhausted near x = " + std::to_string(x) +
                                      " (lambda = " + std::to_string(lambda) + ")");
            }
            if (res == odeint::fail) {
                dt = dt_try;
                if (std::abs(dt) < 1e-14 * (1.0 + std::abs(x))) {
                    throw numerical_error("step size underflow at x = " + std::to_string(x));
                }
                continue;
            }
            if (clip) {
                x = target;
            } else {
                dt = dt_try;
            }
            if ((before > 0.0 && st.s[0] < 0.0) || (before < 0.0 && st.s[0] > 0.0)) ++st.sign_changes;
            const double m = std::max(std::max(std::abs(st.s[0]), std::abs(st.s[1])),
                                      std::max(std::abs(st.s[2]), std::abs(st.s[3])));
            if (m > cfg.renorm_threshold) {
                for (int i = 0; i < 4; ++i) st.s[i] /= m;
                st.s[4] /= m * m;
                st.log_scale += std::log(m);
                ++st.renormalizations;
                stepper.reset();
            }
        }
        visit(k, st);
    }
}

}  // namespace oscspec::detail
