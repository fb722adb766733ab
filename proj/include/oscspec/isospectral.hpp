#pragma once

#include <span>

#include "oscspec/potential.hpp"
#include "oscspec/spectral.hpp"

namespace oscspec {

// Shift the norming constant of index n by t, keeping the Dirichlet spectrum.
struct DarbouxMove {
    int n = 0;
    double t = 0.0;
};

struct DarbouxResult {
    Potential q;
    double min_eta = 1.0;
};

DarbouxResult darboux_detailed(const Potential& q, const DarbouxMove& move, const SpectralSettings& cfg = {});
Potential darboux(const Potential& q, const DarbouxMove& move, const SpectralSettings& cfg = {});

// Moves are applied right to left: the last move acts on q first.
Potential flow(const Potential& q, std::span<const DarbouxMove> moves, const SpectralSettings& cfg = {});

}  // namespace oscspec
