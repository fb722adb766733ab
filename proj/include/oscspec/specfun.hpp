#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace oscspec {

struct ValueDeriv {
    double value = 0.0;
    double deriv = 0.0;
};

// (value, deriv) * exp(log_scale); keeps huge boundary values representable.
struct ScaledPair {
    double value = 0.0;
    double deriv = 0.0;
    double log_scale = 0.0;
};

// Coefficients of (1 - z)^{-1/2}.
double binom_E(int k);
std::vector<double> binom_E_table(std::size_t count);

// Closed-form norming constant of the unperturbed Dirichlet problem.
double nu0(int n);

// L2(R)-normalized Hermite function and its derivative.
ValueDeriv psi0(int n, double x);
// All orders 0..values.size()-1 at one point.
void psi0_all(double x, std::span<double> values, std::span<double> derivs);

// Scaled even/odd Hermite basis 2^{1/4} psi_n^0(sqrt(2) x).
double scaled_hermite(int n, double x);

// Decaying unperturbed solution at x = 0, from the sine/cosine-Gamma product form.
ValueDeriv psi_plus0_boundary(double lambda);
ScaledPair psi_plus0_boundary_scaled(double lambda);

// Parabolic cylinder function D_mu(x), x >= 0.
double weber_d(double mu, double x);
inline constexpr double weber_max_order = 300.0;

// Companion solution at lambda = 2n+1: {chi, psi_n^0} = 1 and psi*chi odd.
ValueDeriv chi0(int n, double x);

// Boundary values of psi_plus^0 and its lambda-derivatives at the Dirichlet
// eigenvalue 4n+3.
struct BoundaryConstants {
    int n = 0;
    double kappa = 0.0;
    double kappa_prime = 0.0;
    double kappa_dot = 0.0;
    double kappa_ddot = 0.0;
    double kappa_dddot = 0.0;
    double kappa_prime_dot = 0.0;
    double kappa_prime_ddot = 0.0;
    double log_scale = 0.0;  // true values are the fields times exp(log_scale)
};

BoundaryConstants kappa_set(int n);
// Same constants with a common log scale pulled out; safe for any n.
BoundaryConstants kappa_set_scaled(int n);

// The three combinations that decay like 1/n.
struct KappaCombinations {
    double first = 0.0;   // kappa_prime_dot/kappa_prime - kappa_ddot/(2 kappa_dot)
    double second = 0.0;  // kappa_prime_ddot/kappa_prime - (kappa_prime_dot/kappa_prime)^2 + pi^2/16
    double third = 0.0;   // kappa_dddot/(3 kappa_dot) - kappa_ddot^2/(4 kappa_dot^2) + pi^2/48
};

KappaCombinations kappa_combinations(const BoundaryConstants& k);

}  // namespace oscspec
