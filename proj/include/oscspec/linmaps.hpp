#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oscspec/potential.hpp"

namespace oscspec {

// Generating-function coefficient maps of a potential and the linear part of the spectral map.

// F coefficients; exact basis coefficients are used when the potential carries them.
std::vector<double> map_F(const Potential& q, std::size_t count);
// G coefficients from odd-basis inner products.
std::vector<double> map_G(const Potential& q, std::size_t count);
// G from F through the 1/sqrt(zeta) kernel (valid for all indices when F is finite).
std::vector<double> map_G_from_F(std::span<const double> F, std::size_t count);

std::vector<double> map_FD_from_F(std::span<const double> F, std::size_t count);
std::vector<double> map_GD_from_F(std::span<const double> F, std::size_t count);
std::vector<double> map_FD(const Potential& q, std::size_t count, std::size_t basis = 0);
std::vector<double> map_GD(const Potential& q, std::size_t count, std::size_t basis = 0);

double series_at_one(std::span<const double> c);
double series_at_minus_one(std::span<const double> c);
// (G_D q)(1) from F(-1).
double gd_at_one(std::span<const double> F);

struct TildeSettings {
    std::size_t basis = 0;          // F truncation; 0 picks the potential's own size or 4 * count
    std::size_t gd_length = 8192;   // G_D coefficients kept in the kernel sum
};

struct TildeResult {
    std::vector<double> coeffs;
    double kernel_bound = 0.0;
};

TildeResult tilde_n(const Potential& q, std::size_t count, const TildeSettings& cfg = {});
TildeResult tilde_from_F(std::span<const double> F, std::size_t count, const TildeSettings& cfg = {});

struct LinearModelData {
    std::vector<double> ahat;    // 2 qhat_{2n+1}
    double q0 = 0.0;
    std::vector<double> btilde;  // -2 qtilde_n
};

LinearModelData linear_model(const Potential& q, std::size_t N, const TildeSettings& cfg = {});

struct IdentityCheck {
    std::string name;
    double residual = 0.0;
    double bound = 0.0;
    bool pass() const { return residual <= bound; }
};

struct IdentitySettings {
    std::size_t count = 12;       // indices compared
    std::size_t basis = 0;        // 0: potential's Hermite length, else 4 * count
    std::size_t extension = 1 << 15;  // series length for slowly decaying sums
    double tolerance = 1e-6;
};

// Every coefficient identity linking q-hat, q-check, F, G, F_D, G_D and q-tilde.
std::vector<IdentityCheck> coefficient_identities(const Potential& q, const IdentitySettings& cfg = {});

}  // namespace oscspec
