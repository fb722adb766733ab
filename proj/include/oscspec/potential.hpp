#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "oscspec/grid.hpp"

namespace oscspec {

// Real potential on [0, xmax], extended evenly to x < 0 and by zero beyond xmax.
// Immutable; copies share the interpolant.
class Potential {
public:
    static Potential from_samples(std::vector<double> samples, double h);
    static Potential from_samples(std::vector<double> samples, const Grid& grid);
    // q = sum_k c_k psi~_{2k}^0 sampled on the grid.
    static Potential from_hermite(std::vector<double> coeffs, const Grid& grid);
    static Potential from_function(const std::function<double(double)>& f, const Grid& grid);
    static Potential zero(const Grid& grid);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::optional<std::vector<double>>& hermite() const noexcept { return hermite_; }
    double q0() const noexcept { return values_.front(); }
    bool is_zero() const noexcept { return zero_; }

    double operator()(double x) const;

    Potential scaled(double a) const;
    // a*p + b*r on a common grid.
    static Potential combine(double a, const Potential& p, double b, const Potential& r);

private:
    struct Interp;
    Potential(Grid grid, std::vector<double> values, std::optional<std::vector<double>> hermite);

    Grid grid_;
    std::vector<double> values_;
    std::optional<std::vector<double>> hermite_;
    bool zero_ = false;
    std::shared_ptr<const Interp> interp_;
};

// <f, g>_+ for f sampled on the potential grid.
double inner_plus(const Potential& q, std::span<const double> f);

// <q, (psi_n^0)^2>_+
double qhat(const Potential& q, int n);
std::vector<double> qhat_seq(const Potential& q, std::size_t count);

// <q, psi_n^0 chi_n^0>_+
double qcheck(const Potential& q, int n);
std::vector<double> qcheck_seq(const Potential& q, std::size_t count);

// psi_n^0 chi_n^0 sampled on a grid.
std::vector<double> psi_chi0_on_grid(int n, const Grid& grid);

// <q, psi~_j^0>_+ for j = 0..count-1.
std::vector<double> scaled_hermite_products(const Potential& q, std::size_t count);
// psi~_j^0 on the grid, j = 0..count-1 (row j).
std::vector<std::vector<double>> scaled_hermite_table(const Grid& grid, std::size_t count);

double hplus_norm(const Potential& q);
double l2_distance(const Potential& a, const Potential& b);

}  // namespace oscspec
