#include "oscspec/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "oscspec/asymptotics.hpp"
#include "oscspec/errors.hpp"
#include "oscspec/linmaps.hpp"
#include "oscspec/seqspace.hpp"

namespace oscspec {

TraceEstimate trace_q0(std::span<const double> dirichlet, std::span<const double> neumann) {
    if (dirichlet.size() != neumann.size()) throw input_error("trace_q0: spectra of different length");
    TraceEstimate t;
    double s = 0.0;
    for (std::size_t n = 0; n < dirichlet.size(); ++n) {
        s += 2.0 * (neumann[n] - dirichlet[n] + 2.0);
        t.partial_sums.push_back(s);
    }
    t.q0 = s;
    return t;
}

TraceResidual trace_residual(std::span<const double> sigma, std::span<const double> qhat_odd) {
    if (qhat_odd.size() < sigma.size()) throw input_error("trace_residual: qhat sequence too short");
    TraceResidual t;
    const std::size_t N = sigma.size();
    for (std::size_t n = 0; n < N; ++n) {
        t.residuals.push_back(sigma[n] - sigma0(static_cast<int>(n)) - 2.0 * qhat_odd[n]);
        t.partial += t.residuals.back();
    }
    if (N < 8) return t;
    const std::size_t first = std::max<std::size_t>(4, N / 3), last = N - 1;
    double peak = 0.0;
    for (std::size_t n = first; n <= last; ++n) peak = std::max(peak, std::abs(t.residuals[n]));
    if (peak < 1e-13) {
        t.defect = t.partial;
        return t;
    }
    const double p = fitted_exponent(t.residuals, first, last);
    t.fitted_exponent = p;
    // amplitude: mean of log|r_n| - p log n over the window
    double la = 0.0;
    for (std::size_t n = first; n <= last; ++n)
        la += std::log(std::abs(t.residuals[n]) + 1e-300) - p * std::log(static_cast<double>(n));
    const double amp = std::exp(la / static_cast<double>(last - first + 1));
    const double sign = t.residuals[last] < 0.0 ? -1.0 : 1.0;
    if (p >= -1.0) {
        t.tail_estimate = 0.0;
        t.envelope = std::numeric_limits<double>::infinity();
    } else {
        // midpoint rule for sum_{n >= N} n^p
        const double start = static_cast<double>(N) - 0.5;
        t.tail_estimate = sign * amp * std::pow(start, p + 1.0) / (-p - 1.0);
        t.envelope = std::abs(t.tail_estimate);
    }
    t.defect = t.partial + t.tail_estimate;
    return t;
}

TraceResidual trace_residual(const Potential& q, int N, const SpectralSettings& cfg) {
    const auto eig = dirichlet_spectrum(q, N, cfg);
    std::vector<double> sigma(N);
    for (int n = 0; n < N; ++n) sigma[n] = eig[n].value;
    const auto qh = qhat_seq(q, 2 * static_cast<std::size_t>(N));
    std::vector<double> odd(N);
    for (int n = 0; n < N; ++n) odd[n] = qh[2 * n + 1];
    return trace_residual(sigma, odd);
}

void check_ordering(const SpectralDataSet& data) {
    for (int n = 0; n < data.N; ++n) {
        if (!std::isfinite(data.sigma[n]) || !std::isfinite(data.r[n]))
            throw input_error("non-finite spectral data at index " + std::to_string(n));
        if (n > 0 && !(data.sigma[n] > data.sigma[n - 1]))
            throw numerical_error("target violates the ordering sigma_0 < sigma_1 < ... at index " +
                                  std::to_string(n) + " (sigma = " + std::to_string(data.sigma[n]) + " after " +
                                  std::to_string(data.sigma[n - 1]) + ")");
    }
}

namespace {

std::size_t slots(int N) { return 2 * static_cast<std::size_t>(N) + 1; }

double slot_weight(std::size_t i, int N) {
    const auto n = static_cast<std::size_t>(N);
    if (i <= n) return 1.0;
    return std::pow(1.0 + static_cast<double>(i - n - 1), 0.75);
}

std::vector<double> target_values(const SpectralDataSet& d) {
    std::vector<double> v(d.mu);
    v.push_back(d.q0);
    v.insert(v.end(), d.r.begin(), d.r.end());
    return v;
}

struct Evaluation {
    ForwardValue fwd;
    std::vector<double> residual;  // weighted, active slots only
    double norm = 0.0;
};

class NewtonSolver {
public:
    NewtonSolver(const ReconstructionProblem& p, std::vector<bool> active, const SpectralSettings& cfg)
        : p_(p), active_(std::move(active)), cfg_(cfg), target_(target_values(p.target)) {}

    Evaluation evaluate(std::span<const double> c, bool jac) const {
        Evaluation e;
        e.fwd = forward_map(c, p_.target.N, p_.grid, jac, cfg_);
        double s = 0.0;
        for (std::size_t i = 0; i < target_.size(); ++i) {
            if (!active_[i]) continue;
            const double r = slot_weight(i, p_.target.N) * (e.fwd.values[i] - target_[i]);
            e.residual.push_back(r);
            s += r * r;
        }
        e.norm = std::sqrt(s);
        return e;
    }

    Reconstruction run(std::vector<double> c) const {
        Reconstruction out;
        const auto& tol = p_.tol;
        Evaluation cur = evaluate(c, true);
        out.log.push_back({0, cur.norm, 0.0});
        std::vector<double> best = c;
        double best_norm = cur.norm;
        for (int it = 1; it <= tol.max_iter && cur.norm >= tol.residual_tol; ++it) {
            const std::size_t cols = c.size();
            const std::size_t rows = cur.residual.size();
            Eigen::MatrixXd J(rows, cols);
            Eigen::VectorXd F(rows);
            std::size_t row = 0;
            for (std::size_t i = 0; i < target_.size(); ++i) {
                if (!active_[i]) continue;
                const double w = slot_weight(i, p_.target.N);
                for (std::size_t k = 0; k < cols; ++k) J(row, k) = w * cur.fwd.jacobian[i][k];
                F(row) = cur.residual[row];
                ++row;
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto& sv = svd.singularValues();
            const double smax = sv(0), smin = sv(sv.size() - 1);
            out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
            if (!(smin > tol.rank_tol * smax)) {
                throw numerical_error("Jacobian rank deficient at iteration " + std::to_string(it) +
                                      ": singular values " + std::to_string(smax) + " .. " + std::to_string(smin) +
                                      ", condition " + std::to_string(out.condition));
            }
            const Eigen::VectorXd step = -svd.solve(F);
            const double step_norm = step.norm();

            double alpha = 1.0;
            bool accepted = false;
            std::vector<double> trial(cols);
            Evaluation next;
            for (int halvings = 0; halvings < 20; ++halvings, alpha *= 0.5) {
                for (std::size_t k = 0; k < cols; ++k) trial[k] = c[k] + alpha * step(static_cast<Eigen::Index>(k));
                try {
                    next = evaluate(trial, false);
                } catch (const numerical_error&) {
                    continue;
                } catch (const input_error&) {  // trial potential pushed an eigenvalue off the grid
                    continue;
                }
                if (next.norm < cur.norm) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                out.log.push_back({it, cur.norm, 0.0});
                break;
            }
            c = trial;
            cur = evaluate(c, true);
            out.log.push_back({it, cur.norm, alpha * step_norm});
            if (cur.norm < best_norm) {
                best_norm = cur.norm;
                best = c;
            }
            if (alpha * step_norm < tol.step_tol) break;
        }
        out.residual = best_norm;
        out.converged = best_norm < tol.residual_tol;
        out.coeffs = best;
        out.q = Potential::from_hermite(best, p_.grid);
        return out;
    }

private:
    const ReconstructionProblem& p_;
    std::vector<bool> active_;
    SpectralSettings cfg_;
    std::vector<double> target_;
};

std::size_t resolved_dim(const ReconstructionProblem& p) {
    const std::size_t dim = p.basis_dim ? p.basis_dim : slots(p.target.N);
    if (dim == 0) throw input_error("empty Hermite basis");
    if (dim > slots(p.target.N))
        throw input_error("basis_dim " + std::to_string(dim) + " exceeds 2N+1 = " + std::to_string(slots(p.target.N)));
    return dim;
}

}  // namespace

ForwardValue forward_map(std::span<const double> coeffs, int N, const Grid& grid, bool with_jacobian,
                         const SpectralSettings& cfg) {
    const auto q = Potential::from_hermite(std::vector<double>(coeffs.begin(), coeffs.end()), grid);
    const auto eig = dirichlet_spectrum(q, N, cfg);
    ForwardValue out;
    out.values.assign(slots(N), 0.0);
    const std::size_t dim = coeffs.size();
    std::vector<std::vector<double>> basis;
    std::vector<double> weights;
    if (with_jacobian) {
        const auto table = scaled_hermite_table(grid, 2 * dim);
        for (std::size_t k = 0; k < dim; ++k) basis.push_back(table[2 * k]);
        weights = simpson_weights(grid.size(), grid.h());
        out.jacobian.assign(slots(N), std::vector<double>(dim, 0.0));
    }
    auto pair = [&](std::span<const double> g, std::size_t k) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) s += weights[i] * g[i] * basis[k][i];
        return s;
    };
    const double q0 = q.q0();
    out.values[N] = q0;
    for (int n = 0; n < N; ++n) {
        if (n > 0 && !(eig[n].value > eig[n - 1].value))
            throw numerical_error("forward map: eigenvalues not increasing at index " + std::to_string(n));
        const auto e = solve_eigen(q, n, eig[n].value, {.chi = with_jacobian, .route_b = false}, cfg);
        out.values[n] = e.sigma - sigma0(n);
        out.values[N + 1 + n] = r_from_nu(e.nu, n, q0);
        if (!with_jacobian) continue;
        const auto gs = grad_sigma(e);
        const auto gn = grad_nu(e);
        const double q0_weight = 1.0 / (2.0 * (2.0 * n + 1.0));
        for (std::size_t k = 0; k < dim; ++k) {
            out.jacobian[n][k] = pair(gs, k);
            out.jacobian[N + 1 + n][k] = pair(gn, k) + q0_weight * basis[k][0];
        }
    }
    if (with_jacobian)
        for (std::size_t k = 0; k < dim; ++k) out.jacobian[N][k] = basis[k][0];
    return out;
}

std::vector<double> linear_model_init(const SpectralDataSet& target, std::size_t basis_dim, const Grid& grid,
                                      bool with_r) {
    const int N = target.N;
    const std::size_t rows = with_r ? slots(N) : static_cast<std::size_t>(N) + 1;
    // columns: linear data of each basis element
    Eigen::MatrixXd A(rows, basis_dim);
    for (std::size_t k = 0; k < basis_dim; ++k) {
        std::vector<double> e(k + 1, 0.0);
        e[k] = 1.0;
        const auto lin = linear_model(Potential::from_hermite(e, grid), static_cast<std::size_t>(N));
        for (int n = 0; n < N; ++n) {
            A(n, k) = lin.ahat[n];
            if (with_r) A(N + 1 + n, k) = lin.btilde[n];
        }
        A(N, k) = lin.q0;
    }
    // data side in the linear model's normalization, nonlinear part of r removed
    Eigen::VectorXd b(rows);
    for (int n = 0; n < N; ++n) b(n) = target.mu[n];
    if (with_r) {
        const auto R = correction_R_seq(target.mu);
        for (int n = 0; n < N; ++n) b(N + 1 + n) = 2.0 * target.r[n] - target.q0 / (2.0 * (2.0 * n + 1.0)) - R[n];
    }
    b(N) = target.q0;
    for (std::size_t i = 0; i < rows; ++i) {
        const double w = slot_weight(i, N);
        A.row(static_cast<Eigen::Index>(i)) *= w;
        b(static_cast<Eigen::Index>(i)) *= w;
    }
    const Eigen::VectorXd c = A.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    return {c.data(), c.data() + c.size()};
}

Reconstruction reconstruct(const ReconstructionProblem& problem, const SpectralSettings& cfg) {
    check_ordering(problem.target);
    const std::size_t dim = resolved_dim(problem);
    std::vector<double> c = problem.init ? *problem.init : linear_model_init(problem.target, dim, problem.grid);
    c.resize(dim, 0.0);
    NewtonSolver solver(problem, std::vector<bool>(slots(problem.target.N), true), cfg);
    return solver.run(std::move(c));
}

DarbouxReconstruction reconstruct_by_flow(const ReconstructionProblem& problem, const SpectralSettings& cfg) {
    check_ordering(problem.target);
    const int N = problem.target.N;
    // square system for (mu, q(0)); the r-slots are left to the flow
    const std::size_t dim = std::min(resolved_dim(problem), static_cast<std::size_t>(N) + 1);
    std::vector<bool> active(slots(N), false);
    for (int i = 0; i <= N; ++i) active[i] = true;
    NewtonSolver solver(problem, active, cfg);
    std::vector<double> c;
    if (problem.init) {
        c = *problem.init;
        c.resize(dim, 0.0);
    } else {
        // the (mu, q(0)) rows alone can start far out for large potentials; keep the better start
        double best = std::numeric_limits<double>::infinity();
        for (bool with_r : {false, true}) {
            auto trial = linear_model_init(problem.target, dim, problem.grid, with_r);
            double res = std::numeric_limits<double>::infinity();
            try {
                res = solver.evaluate(trial, false).norm;
            } catch (const std::runtime_error&) {
            }
            if (res < best) {
                best = res;
                c = std::move(trial);
            }
        }
        if (c.empty()) c.assign(dim, 0.0);
    }
    DarbouxReconstruction out{Potential::zero(problem.grid), solver.run(std::move(c)), {}};
    const auto& stage = out.spectrum_stage;
    const auto data = spectral_data(stage.q, N, false, cfg);
    for (int n = 0; n < N; ++n) out.moves.push_back({n, problem.target.r[n] - data.r[n]});
    out.q = flow(stage.q, out.moves, cfg);
    return out;
}

}  // namespace oscspec
