#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "oscspec/grid.hpp"
#include "oscspec/potential.hpp"
#include "oscspec/specfun.hpp"

namespace oscspec {

struct OdeSettings {
    double rtol = 1e-10;
    double atol = 1e-12;
};

enum class TraceKind { phi, theta, psi_plus, iterate };

// Solution of -y'' + (x^2 + q) y = lambda y sampled on the potential grid.
// True values are psi[i] * exp(log_scale).
struct SolutionTrace {
    TraceKind kind = TraceKind::phi;
    double lambda = 0.0;
    Grid grid{1.0, default_step};
    std::vector<double> psi;
    std::vector<double> dpsi;
    // int_{x_i}^{xmax} psi^2, in units of exp(2 log_scale); filled for psi_plus only
    std::vector<double> tail_mass;
    double log_scale = 0.0;
    int renormalizations = 0;
    int nodes = 0;

    double value(std::size_t i) const { return psi[i] * std::exp(log_scale); }
    double deriv(std::size_t i) const { return dpsi[i] * std::exp(log_scale); }
    std::vector<double> values() const;
    std::vector<double> derivs() const;
};

struct PhiTheta {
    SolutionTrace phi;    // phi(0) = 0, phi'(0) = 1
    SolutionTrace theta;  // theta(0) = 1, theta'(0) = 0
};

PhiTheta solve_from_zero(const Potential& q, double lambda, const OdeSettings& cfg = {});

// psi_+(0, lambda) normalized to agree with the q = 0 decaying solution beyond xmax.
// True boundary values are (value, deriv) * exp(log_scale).
struct BoundaryData {
    double value = 0.0;
    double deriv = 0.0;
    double log_scale = 0.0;
    int nodes = 0;  // zeros of psi_+ on (0, xmax)
};

BoundaryData psi_plus_at_zero(const Potential& q, double lambda, const OdeSettings& cfg = {});
SolutionTrace solve_psi_plus(const Potential& q, double lambda, const OdeSettings& cfg = {});

// k-th term of the iteration series for psi_+ evaluated at x = 0 (value, derivative).
ValueDeriv iteration_term(const Potential& q, double lambda, int k, const OdeSettings& cfg = {});

// Largest lambda the grid can resolve.
double max_lambda(const Grid& grid);

}  // namespace oscspec
