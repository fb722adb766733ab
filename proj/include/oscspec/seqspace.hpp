#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace oscspec {

// Truncated power-series / Laurent coefficient algebra.

double l2r_norm(std::span<const double> c, double r);

// Coefficients of (1-z)^{1/2}, (1+z)^{1/2} and (1-z)^{-1/2}.
std::vector<double> sqrt1mz_series(std::size_t count);
std::vector<double> sqrt1pz_series(std::size_t count);
std::vector<double> inv_sqrt1mz_series(std::size_t count);

// First `count` coefficients of a*b (count = 0: length of a).
std::vector<double> cauchy(std::span<const double> a, std::span<const double> b, std::size_t count = 0);

std::vector<double> sqrt1mz_mul(std::span<const double> c, std::size_t count = 0);
std::vector<double> sqrt1mz_div(std::span<const double> c, std::size_t count = 0);

enum class KernelSign { plus, minus };  // 1/sqrt(zeta) or 1/sqrt(-zeta)

// Laurent coefficient s of 1/sqrt(+-zeta).
double inv_sqrt_kernel(KernelSign sign, long s);

struct KernelResult {
    std::vector<double> coeffs;
    double tail_bound = 0.0;  // sum of |c_k kernel| over pairs dropped by the half-width
};

// P_+[c(zeta)/sqrt(+-zeta)], coefficients 0..count-1, kernel restricted to |s| <= half_width.
KernelResult pp_inv_sqrt(KernelSign sign, std::span<const double> c, long half_width, std::size_t count = 0);

struct OpAResult {
    KernelResult value;
    double domain_defect = 0.0;  // sum of the input coefficients; zero on the proper domain
};
OpAResult op_A(std::span<const double> f, long half_width, std::size_t count = 0);

// P_+[g(zeta)/sqrt(1 - conj(zeta))]: h_n = sum_m g_{n+m} E_m over the available g.
std::vector<double> pp_conj_inv_sqrt1mz(std::span<const double> g, std::size_t count = 0);

// sum_{m >= 0} c_m/(2(n-m)+1) with c_m ~ amp * m^{-1/2} assumed beyond the supplied entries.
double odd_kernel_sum(std::span<const double> c, long n, double tail_amp = 0.0);

struct HSeq {
    std::vector<double> f;
    std::vector<double> h;  // (1-z)^{-1/2} f

    static HSeq from_f(std::vector<double> f);
    static HSeq from_h(std::vector<double> h);
    double norm() const { return l2r_norm(f, 0.75); }
};

struct HDecomposition {
    double v = 0.0;
    std::vector<double> h0;
};

HDecomposition h_decompose(const HSeq& h);

// Least-squares slope of log|r_n| against log n over the given indices.
double fitted_exponent(std::span<const double> residuals, std::size_t first, std::size_t last);

}  // namespace oscspec
