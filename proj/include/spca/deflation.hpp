#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "spca/errors.hpp"
#include "spca/linalg.hpp"
#include "spca/matrix.hpp"
#include "spca/solver.hpp"

namespace spca {

/// How the covariance is updated between successive single-PC solves.
/// Schur-complement deflation preserves positive-semidefiniteness for
/// arbitrary unit directions; Hotelling deflation only does so for exact
/// eigenvectors and is kept for comparison.
enum class DeflationScheme { Hotelling, SchurComplement };

/// Deflates sigma along the unit direction x.
inline SymMatrix deflate(const SymMatrix& sigma, const Vector& x, DeflationScheme scheme) {
    if (static_cast<int>(x.size()) != sigma.dim())
        throw DimensionMismatch("deflation direction length does not match the matrix");
    if (std::abs(norm2(x) - 1.0) > 1e-6) throw Error("deflation direction must have unit l2 norm");
    const Vector sx = multiply(sigma, x);
    const double q = dot(x, sx);
    const int p = sigma.dim();
    SymMatrix out = sigma;
    if (scheme == DeflationScheme::SchurComplement) {
        if (q <= 1e-12) throw DegenerateDirection("direction carries no variance; deflation undefined");
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) out(i, j) -= sx[i] * sx[j] / q;
    } else {
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) out(i, j) -= q * x[i] * x[j];
    }
    // suppress asymmetry drift from the rank-one update
    Matrix raw(p, p, Vector(out.data().begin(), out.data().end()));
    return SymMatrix::symmetrized(raw);
}

/// Explained variance of possibly correlated loadings, computed so that
/// overlapping directions are not double counted: the Cholesky factor R of
/// the score Gram matrix L' Sigma L is formed and sum_j R_jj^2 returned.
/// For Sigma-orthogonal loadings this equals Tr(L' Sigma L).
inline double adjusted_variance(const SymMatrix& sigma, const Matrix& loadings) {
    if (loadings.rows() != sigma.dim())
        throw DimensionMismatch("loading matrix row count does not match the covariance");
    const int r = loadings.cols();
    Matrix gram_raw(r, r);
    std::vector<Vector> sx(r);
    for (int j = 0; j < r; ++j) sx[j] = multiply(sigma, loadings.col(j));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) gram_raw(i, j) = dot(loadings.col(i), sx[j]);
    const Matrix chol = cholesky_upper(SymMatrix::symmetrized(gram_raw));
    double total = 0.0;
    for (int j = 0; j < r; ++j) total += chol(j, j) * chol(j, j);
    return total;
}

/// Outcome of a sequential multi-component extraction.
struct MultiPcResult {
    Matrix loadings;                        // p x r, one column per component
    std::vector<int> cardinalities;
    double adjusted_variance = 0.0;
    double adjusted_variance_pct = 0.0;     // vs Tr(Sigma)
    std::vector<SolveReport> per_pc_reports;
};

/// Extracts one sparse PC per formulation in f_seq, deflating sigma
/// between solves. The adjusted variance is always computed against the
/// original sigma. Errors from the solver or the deflation are annotated
/// with the failing component (1-based).
inline MultiPcResult solve_multi(const SymMatrix& sigma, std::span<const Formulation> f_seq,
                                 const SolverConfig& cfg, DeflationScheme scheme) {
    if (f_seq.empty()) throw DimensionMismatch("at least one formulation is required");
    const int p = sigma.dim();
    const int r = static_cast<int>(f_seq.size());
    MultiPcResult result;
    result.loadings = Matrix(p, r);
    SymMatrix current = sigma;
    for (int j = 0; j < r; ++j) {
        try {
            SolveReport report = solve(current, f_seq[j], cfg);
            Loading pc = extract_loading(report.y_final);
            for (int i = 0; i < p; ++i) result.loadings(i, j) = pc.loading[i];
            result.cardinalities.push_back(pc.cardinality);
            result.per_pc_reports.push_back(std::move(report));
            if (j + 1 < r) current = deflate(current, pc.loading, scheme);
        } catch (const Error& e) {
            throw Error("component " + std::to_string(j + 1) + ": " + e.what());
        }
    }
    result.adjusted_variance = adjusted_variance(sigma, result.loadings);
    result.adjusted_variance_pct = 100.0 * result.adjusted_variance / trace(sigma);
    return result;
}

}  // namespace spca
