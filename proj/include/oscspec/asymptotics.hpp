#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "oscspec/potential.hpp"

namespace oscspec {

// sigma_n^0 + 2 qhat_{2n+1}
double predict_sigma(const Potential& q, int n);
std::vector<double> predict_sigma_seq(const Potential& q, std::size_t count);

struct CorrectionSettings {
    std::size_t product_terms = 0;    // m-range of the sums; 0 means 8 * mu.size()
    // mu_m ~ v (2m+1)^{-1/2} beyond the supplied entries; nullopt estimates v from mu
    std::optional<double> tail_v;
    std::vector<double> extension;  // mu_m for m >= mu.size(), used before the v model
};

struct CorrectionPieces {
    double log_ratio = 0.0;  // piece 1
    double products = 0.0;   // piece 2
    double kernels = 0.0;    // piece 3
};

// The nonlinear correction to r_n built from the eigenvalue shifts mu.
double correction_R(std::span<const double> mu, int n, const CorrectionSettings& cfg = {});
CorrectionPieces correction_R_pieces(std::span<const double> mu, int n, const CorrectionSettings& cfg = {});
std::vector<double> correction_R_seq(std::span<const double> mu, const CorrectionSettings& cfg = {});

// Leading 1/(n+1) behaviour of pieces 1 and 2 (opposite signs), with v in the (2m+1)^{-1/2} normalization.
double correction_leading(double v, int n);

// Estimate of v in mu_m ~ v (2m+1)^{-1/2} from a finite sequence.
double leading_amplitude(std::span<const double> mu);

// -2 qtilde_n + R_n(mu) for n < mu.size().
std::vector<double> predict_r_seq(std::span<const double> qtilde, std::span<const double> mu,
                                  const CorrectionSettings& cfg = {});

// Same, with mu extended by 2 qhat_{2m+1} of q up to the product range.
std::vector<double> predict_r_seq(const Potential& q, std::span<const double> qtilde, std::span<const double> mu,
                                  CorrectionSettings cfg = {});

// r in the normalization the prediction refers to: 2 (nu - nu^0) + q(0)/(2(2n+1)).
double prediction_r(double nu, int n, double q0);

// (kappa'_dot/kappa') mu_n - qcheck_{2n+1}: predicted log[psi_+'(0, sigma_n)/kappa'].
double predict_logpsi_prime(double qcheck_odd, int n, double mu_n);

struct ResidualReport {
    std::size_t first = 0;
    std::size_t last = 0;
    std::vector<double> residuals;
    double fitted_exponent = 0.0;
    std::vector<double> weighted_norms;  // partial l2_{3/4} norms
};

ResidualReport make_residual_report(std::vector<double> residuals, std::size_t first, std::size_t last);

}  // namespace oscspec
