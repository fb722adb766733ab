#include "oscspec/isospectral.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "oscspec/errors.hpp"

namespace oscspec {

DarbouxResult darboux_detailed(const Potential& q, const DarbouxMove& move, const SpectralSettings& cfg) {
    if (move.n < 0) throw input_error("Darboux move needs a nonnegative index");
    if (!std::isfinite(move.t)) throw input_error("Darboux shift must be finite");
    if (move.t == 0.0) return {q, 1.0};

    const double sigma = dirichlet_eigenvalue(q, move.n, cfg).value;
    const auto e = solve_eigen(q, move.n, sigma, {.chi = false, .route_b = false}, cfg);
    // with nu = 2 log psi_{n,D}'(0) the factor 1 + (e^{-t} - 1) int_x^inf psi^2 raises nu_n by t
    const double s = std::expm1(-move.t);
    const auto v = q.values();
    std::vector<double> out(v.size());
    double min_eta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double p = e.psi.psi[i], dp = e.psi.dpsi[i];
        const double eta = 1.0 + s * e.tail[i];
        min_eta = std::min(min_eta, eta);
        if (!(eta > 0.0)) {
            throw numerical_error("Darboux factor not positive at x = " + std::to_string(q.grid().x(i)));
        }
        const double d1 = -s * p * p / eta;
        const double d2 = -s * 2.0 * p * dp / eta;
        out[i] = v[i] - 2.0 * (d2 - d1 * d1);
    }
    return {Potential::from_samples(std::move(out), q.grid()), min_eta};
}

Potential darboux(const Potential& q, const DarbouxMove& move, const SpectralSettings& cfg) {
    return darboux_detailed(q, move, cfg).q;
}

Potential flow(const Potential& q, std::span<const DarbouxMove> moves, const SpectralSettings& cfg) {
    Potential cur = q;
    for (std::size_t k = moves.size(); k-- > 0;) {
        try {
            cur = darboux(cur, moves[k], cfg);
        } catch (const numerical_error& ex) {
            throw numerical_error("flow step " + std::to_string(k) + ": " + ex.what());
        }
    }
    return cur;
}

}  // namespace oscspec
