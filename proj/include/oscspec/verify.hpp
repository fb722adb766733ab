#pragma once

#include <optional>
#include <vector>

#include "oscspec/config.hpp"
#include "oscspec/linmaps.hpp"
#include "oscspec/potential.hpp"
#include "oscspec/spectral.hpp"

namespace oscspec {

// Remainders after the first-order predictions, n = 0..N-1.
struct AsymptoticResiduals {
    std::vector<double> sigma;   // sigma_n - sigma_n^0 - 2 qhat_{2n+1}
    std::vector<double> r;       // doubled-normalization r_n + 2 qtilde_n - R_n(mu)
    std::vector<double> logpsi;  // log|psi_+'(0, sigma_n)/kappa'| minus its prediction
};

AsymptoticResiduals asymptotic_residuals(const Potential& q, int N, const SpectralSettings& cfg = {});

// Every identity and asymptotic check on q; `data` replaces the computed spectra where given
// (sigma for the spectrum and trace checks, neumann for the trace formula).
std::vector<IdentityCheck> run_verification(const Potential& q, const RunConfig& cfg,
                                            const std::optional<SpectralDataSet>& data = std::nullopt);

}  // namespace oscspec
