#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "spca/errors.hpp"
#include "spca/matrix.hpp"

namespace spca {

/// Result of a full symmetric eigendecomposition A = U diag(w) U'.
/// Eigenvalues are sorted non-increasing; column k of `eigenvectors`
/// is the unit eigenvector for eigenvalue k.
struct EigDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;
};

namespace detail {

// Iteration cap per eigenvalue in the QL stage. Failure to deflate within
// this many implicit-shift steps signals pathological input.
inline constexpr int kEigMaxIter = 100;

// Householder reduction of a symmetric matrix to tridiagonal form with
// accumulation of the orthogonal transform (EISPACK tred2 lineage).
// On exit: d holds the diagonal, e the subdiagonal (e[0] unused), and
// z the accumulated orthogonal matrix.
inline void tridiagonalize(Matrix& z, Vector& d, Vector& e) {
    const int n = z.rows();
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
                for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) z(j, i) = z(i, j) = 0.0;
    }
}

// Implicit-shift QL iteration on a symmetric tridiagonal matrix with
// eigenvector accumulation (EISPACK tql2 lineage). d/e as produced by
// tridiagonalize; z is updated so its columns become eigenvectors.
inline void tridiagonal_ql(Vector& d, Vector& e, Matrix& z) {
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == kEigMaxIter)
                    throw NoConvergence("symmetric eigensolver exceeded its iteration cap");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        // recover from a premature underflow split
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace detail

/// Full eigendecomposition of a symmetric matrix via Householder reduction
/// to tridiagonal form followed by implicit-shift QL. O(p^3), dense,
/// suitable for the moderate dimensions this solver targets.
inline EigDecomposition sym_eig(const SymMatrix& a) {
    a.check_finite();
    const int n = a.dim();
    Matrix z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = a(i, j);
    Vector d(n, 0.0), e(n, 0.0);
    if (n == 1) {
        z(0, 0) = 1.0;
        d[0] = a(0, 0);
    } else {
        detail::tridiagonalize(z, d, e);
        detail::tridiagonal_ql(d, e, z);
    }

    // sort non-increasing, permuting eigenvector columns alongside
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return d[i] > d[j]; });
    EigDecomposition out{Vector(n), Matrix(n, n)};
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = d[order[k]];
        for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = z(i, order[k]);
    }
    return out;
}

/// Upper-triangular R with A = R'R for symmetric positive semidefinite A.
/// Pivots in [-1e-8, 0] are clamped to zero (the corresponding row is
/// zeroed); a pivot below -1e-8 raises NotPsd.
inline Matrix cholesky_upper(const SymMatrix& a) {
    const int n = a.dim();
    Matrix r(n, n);
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= r(k, j) * r(k, j);
        if (d < -1e-8) throw NotPsd("matrix is not positive semidefinite (negative pivot)");
        r(j, j) = d > 0.0 ? std::sqrt(d) : 0.0;
        if (r(j, j) == 0.0) continue;  // semidefinite direction; row stays zero
        for (int i = j + 1; i < n; ++i) {
            double s = a(j, i);
            for (int k = 0; k < j; ++k) s -= r(k, j) * r(k, i);
            r(j, i) = s / r(j, j);
        }
    }
    return r;
}

/// Least-squares coefficients (alpha, beta) minimizing
/// ||alpha*v1 + beta*v2 - target||_2 for a p x 2 basis.
inline std::pair<double, double> lstsq_2col(const Matrix& basis, const Vector& target) {
    if (basis.cols() != 2 || basis.rows() != static_cast<int>(target.size()))
        throw DimensionMismatch("basis must be p x 2 and match the target length");
    double g11 = 0.0, g12 = 0.0, g22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (int i = 0; i < basis.rows(); ++i) {
        const double v1 = basis(i, 0), v2 = basis(i, 1);
        g11 += v1 * v1;
        g12 += v1 * v2;
        g22 += v2 * v2;
        b1 += v1 * target[i];
        b2 += v2 * target[i];
    }
    // condition number of the 2x2 Gram from its closed-form eigenvalues
    const double mean = 0.5 * (g11 + g22);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (g11 - g22) * (g11 - g22) + g12 * g12));
    const double lo = mean - disc, hi = mean + disc;
    if (!(lo > 0.0) || hi / lo > 1e12) throw DegenerateBasis("basis columns are numerically dependent");
    const double det = g11 * g22 - g12 * g12;
    return {(b1 * g22 - b2 * g12) / det, (g11 * b2 - g12 * b1) / det};
}

/// Leading r eigenpairs, the classical PCA baseline.
struct PcaResult {
    Vector eigenvalues;   // top r, non-increasing
    Matrix components;    // p x r, column j pairs with eigenvalues[j]
};

inline PcaResult standard_pca(const SymMatrix& sigma, int r) {
    if (r < 1 || r > sigma.dim()) throw DimensionMismatch("invalid component count");
    EigDecomposition eig = sym_eig(sigma);
    PcaResult out{Vector(r), Matrix(sigma.dim(), r)};
    for (int k = 0; k < r; ++k) {
        out.eigenvalues[k] = eig.eigenvalues[k];
        for (int i = 0; i < sigma.dim(); ++i) out.components(i, k) = eig.eigenvectors(i, k);
    }
    return out;
}

}  // namespace spca
