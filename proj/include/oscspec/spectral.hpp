#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "oscspec/ode.hpp"
#include "oscspec/potential.hpp"

namespace oscspec {

struct SpectralSettings {
    OdeSettings ode{};
    double root_tol = 1e-13;  // bracket width relative to 1 + |lambda|
    double fd_step = 2e-3;    // lambda step for psi_+ derivatives, times sqrt(1 + |lambda|)
};

inline double sigma0(int n) { return 4.0 * n + 3.0; }

struct Eigenvalue {
    double value = 0.0;
    double error = 0.0;
};

// n-th Dirichlet eigenvalue; `center` overrides the first-order prediction.
Eigenvalue dirichlet_eigenvalue(const Potential& q, int n, const SpectralSettings& cfg = {},
                                std::optional<double> center = std::nullopt);
std::vector<Eigenvalue> dirichlet_spectrum(const Potential& q, int count, const SpectralSettings& cfg = {});

// Even eigenvalue lambda_{2n} of the even extension; brackets come from the Dirichlet neighbours.
double neumann_eigenvalue(const Potential& q, int n, const SpectralSettings& cfg = {});
std::vector<double> neumann_spectrum(const Potential& q, std::span<const double> dirichlet,
                                     const SpectralSettings& cfg = {});

// lambda-derivatives of psi_+(0, .) and psi_+'(0, .); true values (value, deriv) * exp(log_scale).
BoundaryData psi_plus_dlambda(const Potential& q, double lambda, const SpectralSettings& cfg = {});

// Everything the forward map and the gradient formulas need for one index.
struct EigenData {
    int n = 0;
    double sigma = 0.0;
    double sigma_error = 0.0;
    SolutionTrace psi;            // psi_{n,D}, unit norm, psi'(0) > 0
    double dpsi0 = 0.0;           // psi_{n,D}'(0)
    std::vector<double> tail;     // int_{x}^{xmax} psi_{n,D}^2
    BoundaryData boundary;        // psi_+(0, sigma), psi_+'(0, sigma)
    BoundaryData dlambda;         // lambda-derivatives at sigma
    double nu = 0.0;              // route A
    double nu_route_b = 0.0;
    double log_abs_dpsi_plus = 0.0;  // log |psi_+'(0, sigma)|
    std::vector<double> chi;      // chi_{n,D} (empty unless requested)
    std::vector<double> dchi;
    std::vector<double> theta;    // theta(., sigma)
};

struct EigenRequest {
    bool chi = false;
    bool route_b = true;
};

EigenData solve_eigen(const Potential& q, int n, double sigma, const EigenRequest& req = {},
                      const SpectralSettings& cfg = {});

SolutionTrace eigenfunction(const Potential& q, int n, double sigma, const SpectralSettings& cfg = {});

struct NormingConstant {
    double nu = 0.0;
    double route_gap = 0.0;
};

NormingConstant norming_constant(const Potential& q, int n, double sigma, const SpectralSettings& cfg = {});

// chi_{n,D} values and derivatives on the grid.
struct ChiTrace {
    std::vector<double> value;
    std::vector<double> deriv;
};
ChiTrace chi_nd(const Potential& q, int n, double sigma, const SpectralSettings& cfg = {});

// Gradients with respect to q, sampled on the grid.
std::vector<double> grad_sigma(const EigenData& e);
std::vector<double> grad_log_dpsi_plus(const EigenData& e);  // of log[(-1)^n psi_+'(0, sigma_n)]
std::vector<double> grad_nu(const EigenData& e);

// Asymptotic product psi*chi = -1/(2x) - lambda/(4x^3) - ... of the q = 0 equation, and the
// overlap int_X^inf (P_a)' P_b dx of two such products.
double psi_chi_asymptotic(double lambda, double x);
double psi_chi_tail_overlap(double lambda_a, double lambda_b, double x);

// Pairings <a_n', b_m>_+ over the eigen data (chi requested); row n, column m.
struct OrthogonalityProducts {
    std::vector<std::vector<double>> sq_sq;    // (psi_n^2)', psi_m^2
    std::vector<std::vector<double>> sq_pc;    // (psi_n^2)', psi_m chi_m
    std::vector<std::vector<double>> pc_pc;    // (psi_n chi_n)', psi_m chi_m  (tail beyond xmax added)
    std::vector<std::vector<double>> pc_sq;    // (psi_n chi_n)', psi_m^2
};
OrthogonalityProducts orthogonality_products(std::span<const EigenData> eig);

struct SpectralDataSet {
    int N = 0;
    std::vector<double> sigma;
    std::vector<double> nu;
    std::vector<double> mu;
    double q0 = 0.0;
    std::vector<double> r;
    std::optional<std::vector<double>> neumann;
    std::vector<double> quality;  // per index: max(sigma bracket, nu route gap)
};

double r_from_nu(double nu, int n, double q0);
SpectralDataSet make_dataset(std::vector<double> sigma, std::vector<double> nu, double q0);
SpectralDataSet spectral_data(const Potential& q, int N, bool with_neumann = false,
                              const SpectralSettings& cfg = {});

}  // namespace oscspec
