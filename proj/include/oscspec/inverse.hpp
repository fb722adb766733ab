#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "oscspec/isospectral.hpp"
#include "oscspec/potential.hpp"
#include "oscspec/spectral.hpp"

namespace oscspec {

struct TraceEstimate {
    double q0 = 0.0;
    std::vector<double> partial_sums;  // 2 sum_{n<N} (lambda_{2n} - sigma_n + 2), N = 1..count
};

// q(0) from interlaced even (Neumann) and Dirichlet eigenvalues.
TraceEstimate trace_q0(std::span<const double> dirichlet, std::span<const double> neumann);

struct TraceResidual {
    double partial = 0.0;        // sum_{n<N} (sigma_n - sigma_n^0 - 2 qhat_{2n+1})
    double tail_estimate = 0.0;  // fitted power-law continuation of the summand
    double defect = 0.0;         // partial + tail_estimate
    double envelope = 0.0;       // size of the fitted tail, the scale the defect is judged against
    double fitted_exponent = 0.0;
    std::vector<double> residuals;
};

TraceResidual trace_residual(const Potential& q, int N, const SpectralSettings& cfg = {});
TraceResidual trace_residual(std::span<const double> sigma, std::span<const double> qhat_odd);

struct ReconstructionSettings {
    double residual_tol = 1e-9;
    double step_tol = 1e-12;
    int max_iter = 15;
    double rank_tol = 1e-12;  // relative singular value below which the Jacobian counts as deficient
};

struct ReconstructionProblem {
    SpectralDataSet target;
    std::size_t basis_dim = 0;  // 0: 2N + 1
    Grid grid{1.0, default_step};
    std::optional<std::vector<double>> init;  // Hermite coefficients; default inverts the linear model
    ReconstructionSettings tol{};
};

struct IterationRecord {
    int iter = 0;
    double residual = 0.0;
    double step_norm = 0.0;
};

struct Reconstruction {
    Potential q = Potential::zero(Grid{1.0, default_step});
    std::vector<double> coeffs;
    std::vector<IterationRecord> log;
    bool converged = false;
    double residual = 0.0;
    double condition = 0.0;  // of the last Jacobian
};

// Forward map in Hermite coordinates: (mu_0..mu_{N-1}, q(0), r_0..r_{N-1}) and optionally its Jacobian.
struct ForwardValue {
    std::vector<double> values;
    std::vector<std::vector<double>> jacobian;  // rows = slots, columns = coefficients
};
ForwardValue forward_map(std::span<const double> coeffs, int N, const Grid& grid, bool with_jacobian,
                         const SpectralSettings& cfg = {});

// Least-squares inverse of the linear model; with_r = false uses only the (mu, q(0)) rows.
std::vector<double> linear_model_init(const SpectralDataSet& target, std::size_t basis_dim, const Grid& grid,
                                      bool with_r = true);

Reconstruction reconstruct(const ReconstructionProblem& problem, const SpectralSettings& cfg = {});

// Match mu and q(0) first (minimum-norm Newton), then set r_0..r_{N-1} with Darboux moves.
struct DarbouxReconstruction {
    Potential q;
    Reconstruction spectrum_stage;
    std::vector<DarbouxMove> moves;
};
DarbouxReconstruction reconstruct_by_flow(const ReconstructionProblem& problem, const SpectralSettings& cfg = {});

// Ordering requirement sigma_0 < sigma_1 < ...; throws numerical_error otherwise.
void check_ordering(const SpectralDataSet& data);

}  // namespace oscspec
