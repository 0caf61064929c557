#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "spca/errors.hpp"
#include "spca/linalg.hpp"
#include "spca/matrix.hpp"
#include "spca/projections.hpp"

namespace spca {

/// Which sparse-PCA relaxation is solved: the l1-constrained problem
/// (entrywise ||X||_1 <= k) or the l1-penalized one (rho * ||X||_1 in
/// the objective).
class Formulation {
public:
    enum class Kind { Constrained, Penalized };

    static Formulation constrained(double k) {
        if (!(k > 0.0)) throw DimensionMismatch("constraint radius k must be positive");
        return Formulation(Kind::Constrained, k);
    }
    static Formulation penalized(double rho) {
        if (!(rho > 0.0)) throw DimensionMismatch("penalty rho must be positive");
        return Formulation(Kind::Penalized, rho);
    }

    Kind kind() const { return kind_; }
    double k() const { return value_; }
    double rho() const { return value_; }

private:
    Formulation(Kind kind, double value) : kind_(kind), value_(value) {}
    Kind kind_;
    double value_;
};

/// Geometric decay of the penalty parameter, mu <- max(factor * mu, floor).
struct ContinuationSchedule {
    double factor;
    double floor;
};

struct SolverConfig {
    double mu0 = 1.0;
    std::optional<ContinuationSchedule> continuation;  // nullopt: mu stays fixed
    double tol = 1e-4;
    int max_iters = 5000;
    bool record_descent = false;

    void validate() const {
        if (!(mu0 > 0.0)) throw DimensionMismatch("mu0 must be positive");
        if (!(tol > 0.0)) throw DimensionMismatch("tol must be positive");
        if (max_iters < 1) throw DimensionMismatch("max_iters must be positive");
        if (continuation) {
            if (!(continuation->factor > 0.0) || !(continuation->factor < 1.0))
                throw DimensionMismatch("continuation factor must lie in (0, 1)");
            if (!(continuation->floor > 0.0) || continuation->floor > mu0)
                throw DimensionMismatch("continuation floor must satisfy 0 < floor <= mu0");
        }
    }
};

/// The ADMM iterate triple plus penalty and iteration counter.
struct AdmmState {
    SymMatrix x;
    SymMatrix y;
    SymMatrix lambda;
    double mu = 1.0;
    int iter = 0;
};

/// Per-iteration diagnostics: the stopping quotient and the G-norm of the
/// step taken by the (lambda, y) pair.
struct DescentSample {
    double rel_gap;
    double g_norm_step;
};

struct SolveReport {
    SymMatrix x_final;
    SymMatrix y_final;
    SymMatrix lambda_final;
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;
    double rel_gap = 0.0;
    std::vector<DescentSample> descent_trace;
};

/// ||X - Y||_F / max(1, ||X||_F, ||Y||_F), the stopping quotient.
inline double rel_gap(const AdmmState& s) {
    return frobenius_norm(s.x - s.y) / std::max({1.0, frobenius_norm(s.x), frobenius_norm(s.y)});
}

/// X-step: project Y + mu*Lambda + mu*Sigma onto the spectahedron.
inline SymMatrix x_update(const AdmmState& s, const SymMatrix& sigma) {
    require_same_dim(s.y, sigma);
    const int p = sigma.dim();
    SymMatrix m(p);
    auto pm = m.data();
    auto py = s.y.data(), pl = s.lambda.data(), ps = sigma.data();
    for (size_t i = 0; i < pm.size(); ++i) pm[i] = py[i] + s.mu * (pl[i] + ps[i]);
    return project_spectahedron(m);
}

/// Y-step: l1-ball projection of the vectorized X - mu*Lambda in the
/// constrained case, or soft-thresholding with threshold mu*rho in the
/// penalized case. The update preserves symmetry; the result is
/// re-symmetrized anyway to suppress accumulated drift.
inline SymMatrix y_update(const AdmmState& s, const Formulation& f) {
    const int p = s.x.dim();
    SymMatrix t(p);
    auto pt = t.data();
    auto px = s.x.data(), pl = s.lambda.data();
    for (size_t i = 0; i < pt.size(); ++i) pt[i] = px[i] - s.mu * pl[i];
    if (f.kind() == Formulation::Kind::Penalized) return shrink(t, s.mu * f.rho());
    Vector projected = project_l1_ball(t.data(), f.k());
    Matrix reshaped(p, p, std::move(projected));
    return SymMatrix::symmetrized(reshaped);
}

/// Multiplier step: Lambda - (X - Y) / mu.
inline SymMatrix multiplier_update(const AdmmState& s) {
    SymMatrix out = s.lambda;
    auto po = out.data();
    auto px = s.x.data(), py = s.y.data();
    for (size_t i = 0; i < po.size(); ++i) po[i] -= (px[i] - py[i]) / s.mu;
    return out;
}

/// One continuation step; identity when no schedule is configured.
inline double continuation_step(double mu, const SolverConfig& cfg) {
    if (!cfg.continuation) return mu;
    return std::max(cfg.continuation->factor * mu, cfg.continuation->floor);
}

/// Weighted norm sqrt(mu * ||L||_F^2 + (1/mu) * ||Y||_F^2) of a stacked
/// (Lambda, Y) pair; the metric in which the iterates contract.
inline double g_norm(const SymMatrix& u_lambda, const SymMatrix& u_y, double mu) {
    if (!(mu > 0.0)) throw DimensionMismatch("g_norm weight mu must be positive");
    const double nl = frobenius_norm(u_lambda), ny = frobenius_norm(u_y);
    return std::sqrt(mu * nl * nl + ny * ny / mu);
}

using IterationObserver = std::function<void(const AdmmState&)>;

/// Runs the ADMM loop from the given (Y, Lambda) starting pair until the
/// relative gap drops below cfg.tol or cfg.max_iters is reached. A
/// non-converged run is reported through the `converged` flag, with the
/// partial iterates in the report.
inline SolveReport solve_warm(const SymMatrix& sigma, const Formulation& f, const SolverConfig& cfg,
                              const SymMatrix& y0, const SymMatrix& lambda0,
                              const IterationObserver& observer = {}) {
    cfg.validate();
    sigma.check_finite();
    require_same_dim(sigma, y0);
    require_same_dim(sigma, lambda0);

    AdmmState s{SymMatrix(sigma.dim()), y0, lambda0, cfg.mu0, 0};
    SolveReport report;
    double gap = std::numeric_limits<double>::infinity();
    while (s.iter < cfg.max_iters) {
        const SymMatrix y_prev = s.y;
        const SymMatrix lambda_prev = s.lambda;
        s.x = x_update(s, sigma);
        s.y = y_update(s, f);
        s.lambda = multiplier_update(s);
        ++s.iter;
        gap = rel_gap(s);
        if (cfg.record_descent)
            report.descent_trace.push_back({gap, g_norm(lambda_prev - s.lambda, y_prev - s.y, s.mu)});
        if (observer) observer(s);
        if (gap < cfg.tol) break;
        s.mu = continuation_step(s.mu, cfg);
    }

    report.converged = gap < cfg.tol;
    report.iterations = s.iter;
    report.rel_gap = gap;
    report.objective = inner(sigma, s.x);
    if (f.kind() == Formulation::Kind::Penalized) report.objective -= f.rho() * entry_l1_norm(s.y);
    report.x_final = std::move(s.x);
    report.y_final = std::move(s.y);
    report.lambda_final = std::move(s.lambda);
    return report;
}

/// Cold-started solve with Y = 0, Lambda = 0.
inline SolveReport solve(const SymMatrix& sigma, const Formulation& f, const SolverConfig& cfg,
                         const IterationObserver& observer = {}) {
    return solve_warm(sigma, f, cfg, SymMatrix(sigma.dim()), SymMatrix(sigma.dim()), observer);
}

/// A sparse loading vector recovered from the solver's matrix iterate.
struct Loading {
    Vector loading;    // unit l2 norm, largest-magnitude entry positive
    int cardinality;
};

namespace detail {

inline Loading snap_loading(Vector v, double zero_tol) {
    int card = 0;
    double norm_sq = 0.0;
    int arg_max = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) < zero_tol) {
            v[i] = 0.0;
        } else {
            ++card;
            norm_sq += v[i] * v[i];
        }
        if (std::abs(v[i]) > std::abs(v[arg_max])) arg_max = static_cast<int>(i);
    }
    const double scale = (v[arg_max] < 0.0 ? -1.0 : 1.0) / std::sqrt(norm_sq);
    for (double& vi : v) vi *= scale;
    return {std::move(v), card};
}

}  // namespace detail

/// Rank-one extraction: the top eigenvector of x with entries below
/// zero_tol (absolute) snapped to exact zeros, then renormalized. The
/// largest-magnitude entry is made positive.
inline Loading extract_loading(const SymMatrix& x, double zero_tol) {
    return detail::snap_loading(sym_eig(x).eigenvectors.col(0), zero_tol);
}

/// Extraction with the default threshold 1e-3 * ||v||_inf. Iterates that
/// satisfy the 1e-4 stopping rule still carry residual entries of roughly
/// that size, so the cutoff sits an order of magnitude above the solver
/// noise and well below any loading the solved problems produce.
inline Loading extract_loading(const SymMatrix& x) {
    Vector v = sym_eig(x).eigenvectors.col(0);
    double vmax = 0.0;
    for (double vi : v) vmax = std::max(vmax, std::abs(vi));
    return detail::snap_loading(std::move(v), 1e-3 * vmax);
}

}  // namespace spca
