#include "oscspec/grid.hpp"

#include <cmath>

#include "oscspec/errors.hpp"

namespace oscspec {

Grid::Grid(double xmax, double h) : h_(h) {
    if (!(h > 0.0) || !(xmax > 0.0) || !std::isfinite(xmax)) {
        throw input_error("grid needs positive xmax and h");
    }
    auto intervals = static_cast<std::size_t>(std::ceil(xmax / h - 1e-9));
    if (intervals % 2 == 1) ++intervals;
    if (intervals < 8) intervals = 8;
    n_ = intervals + 1;
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
    return xs;
}

double default_xmax(int n_max) { return std::sqrt(4.0 * n_max + 3.0) + 6.0; }

Grid default_grid(int n_max, double h) { return Grid(default_xmax(n_max), h); }

double simpson(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    std::size_t last = n - 1;
    double tail = 0.0;
    if (last % 2 == 1) {
        // odd interval count: close with a 3/8 panel
        tail = 3.0 * h / 8.0 * (f[last - 3] + 3.0 * f[last - 2] + 3.0 * f[last - 1] + f[last]);
        last -= 3;
    }
    double s = f[0] + f[last];
    for (std::size_t i = 1; i < last; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0 + tail;
}

std::vector<double> simpson_weights(std::size_t n, double h) {
    std::vector<double> w(n, 0.0);
    if (n < 2) return w;
    if (n == 2) {
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    std::size_t last = n - 1;
    if (last % 2 == 1) {
        const double c = 3.0 * h / 8.0;
        w[last - 3] += c;
        w[last - 2] += 3.0 * c;
        w[last - 1] += 3.0 * c;
        w[last] += c;
        last -= 3;
    }
    const double c = h / 3.0;
    w[0] += c;
    w[last] += c;
    for (std::size_t i = 1; i < last; ++i) w[i] += (i % 2 == 1 ? 4.0 : 2.0) * c;
    return w;
}

std::vector<double> cumulative_integral(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 4) {
        for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
        return out;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double panel;
        if (i == 0) {
            panel = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
        } else if (i + 2 == n) {
            panel = h / 24.0 * (9.0 * f[i + 1] + 19.0 * f[i] - 5.0 * f[i - 1] + f[i - 2]);
        } else {
            panel = h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
        }
        out[i + 1] = out[i] + panel;
    }
    return out;
}

std::vector<double> derivative(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 3) return d;
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i >= 2 && i + 2 < n) {
            d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
        } else {
            d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        }
    }
    return d;
}

std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

}  // namespace oscspec
