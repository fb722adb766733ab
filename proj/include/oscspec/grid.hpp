#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace oscspec {

// Uniform grid on [0, xmax] with an even number of intervals.
class Grid {
public:
    Grid(double xmax, double h);

    std::size_t size() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    double xmax() const noexcept { return x(n_ - 1); }
    double x(std::size_t i) const noexcept { return h_ * static_cast<double>(i); }
    std::vector<double> points() const;

    bool operator==(const Grid&) const = default;

private:
    double h_;
    std::size_t n_;
};

inline constexpr double default_step = 1.0 / 200.0;

// Turning point of the largest requested eigenvalue plus a Gaussian buffer.
double default_xmax(int n_max);
Grid default_grid(int n_max, double h = default_step);

double simpson(std::span<const double> f, double h);
std::vector<double> simpson_weights(std::size_t n, double h);

// Running integral from 0 to x_i, fourth order in h.
std::vector<double> cumulative_integral(std::span<const double> f, double h);

// Centered differences (five-point inside), one-sided second-order stencils at both ends.
std::vector<double> derivative(std::span<const double> f, double h);

// Pointwise product helper.
std::vector<double> multiply(std::span<const double> a, std::span<const double> b);

}  // namespace oscspec
