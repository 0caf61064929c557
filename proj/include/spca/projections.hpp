#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "spca/errors.hpp"
#include "spca/linalg.hpp"
#include "spca/matrix.hpp"

namespace spca {

/// Euclidean projection onto the simplex {g >= 0, sum g_i = r},
/// carrying the threshold that solves sum_i max(sigma_i - theta, 0) = r.
struct SimplexProjection {
    Vector gamma;
    double theta;
};

/// Projects sigma onto the simplex of radius r > 0.
///
/// Sorts into non-decreasing order and scans for the smallest index whose
/// suffix admits a positive coordinate, which yields the threshold in
/// closed form. O(p log p).
inline SimplexProjection project_simplex(std::span<const double> sigma, double radius) {
    if (!(radius > 0.0)) throw DimensionMismatch("simplex radius must be positive");
    if (!all_finite(sigma)) throw NonFinite("simplex projection input contains NaN or Inf");
    const int p = static_cast<int>(sigma.size());
    Vector sorted(sigma.begin(), sigma.end());
    std::sort(sorted.begin(), sorted.end());  // non-decreasing

    // suffix[j] = sum of sorted[j..p-1]
    Vector suffix(p + 1, 0.0);
    for (int j = p - 1; j >= 0; --j) suffix[j] = suffix[j + 1] + sorted[j];

    double theta = 0.0;
    for (int j = 0; j < p; ++j) {
        const double t = (suffix[j] - radius) / (p - j);
        if (sorted[j] - t > 0.0) {
            theta = t;
            break;
        }
    }
    SimplexProjection out{Vector(p), theta};
    for (int i = 0; i < p; ++i) out.gamma[i] = std::max(sigma[i] - theta, 0.0);
    return out;
}

/// Euclidean projection onto the l1 ball of radius k. Points already
/// inside the ball are returned unchanged; otherwise the magnitudes are
/// projected onto the simplex and the signs restored.
inline Vector project_l1_ball(std::span<const double> x, double k) {
    if (!(k > 0.0)) throw DimensionMismatch("l1 ball radius must be positive");
    if (!all_finite(x)) throw NonFinite("l1 projection input contains NaN or Inf");
    double l1 = 0.0;
    for (double v : x) l1 += std::abs(v);
    if (l1 <= k) return Vector(x.begin(), x.end());
    Vector mags(x.size());
    for (size_t i = 0; i < x.size(); ++i) mags[i] = std::abs(x[i]);
    SimplexProjection proj = project_simplex(mags, k);
    Vector out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] < 0.0 ? -proj.gamma[i] : proj.gamma[i];
    return out;
}

/// Elementwise soft-thresholding sgn(z_ij) * max(|z_ij| - tau, 0).
inline SymMatrix shrink(const SymMatrix& z, double tau) {
    if (tau < 0.0) throw DimensionMismatch("shrinkage threshold must be nonnegative");
    SymMatrix out = z;
    for (double& v : out.data()) {
        const double m = std::abs(v) - tau;
        v = m > 0.0 ? (v < 0.0 ? -m : m) : 0.0;
    }
    return out;
}

/// Projection onto the spectahedron {X symmetric, X PSD, Tr(X) = 1}:
/// eigendecompose, project the spectrum onto the unit simplex, recompose.
inline SymMatrix project_spectahedron(const SymMatrix& a) {
    EigDecomposition eig = sym_eig(a);
    SimplexProjection proj = project_simplex(eig.eigenvalues, 1.0);
    const int p = a.dim();
    SymMatrix out(p);
    auto o = out.data();
    for (int k = 0; k < p; ++k) {
        const double w = proj.gamma[k];
        if (w == 0.0) continue;
        const Vector uk = eig.eigenvectors.col(k);
        for (int i = 0; i < p; ++i) {
            const double wi = w * uk[i];
            for (int j = 0; j < p; ++j) o[static_cast<size_t>(i) * p + j] += wi * uk[j];
        }
    }
    return out;
}

}  // namespace spca
