#pragma once

// Test-only reference implementations, kept independent of the library's
// algorithmic choices so they can serve as oracles.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "spca/matrix.hpp"
#include "spca/rng.hpp"

namespace oracles {

/// Solves sum_i max(sigma_i - theta, 0) = r by bisection on the monotone
/// piecewise-linear function of theta.
inline double simplex_theta_bisection(const std::vector<double>& sigma, double r) {
    auto g = [&](double theta) {
        double s = 0.0;
        for (double v : sigma) s += std::max(v - theta, 0.0);
        return s;
    };
    double lo = *std::min_element(sigma.begin(), sigma.end()) - r - 1.0;
    double hi = *std::max_element(sigma.begin(), sigma.end());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > r)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline std::vector<double> project_simplex_bisection(const std::vector<double>& sigma, double r) {
    const double theta = simplex_theta_bisection(sigma, r);
    std::vector<double> out(sigma.size());
    for (size_t i = 0; i < sigma.size(); ++i) out[i] = std::max(sigma[i] - theta, 0.0);
    return out;
}

/// Dense QP oracle for the l1-ball projection: enumerate every sign/support
/// pattern in {-1,0,+1}^p, solve the equality-constrained problem on the
/// pattern in closed form, keep the KKT-feasible candidate with the best
/// objective. Exponential, intended for p <= 8.
inline std::vector<double> project_l1_ball_enumeration(const std::vector<double>& x, double radius) {
    const int p = static_cast<int>(x.size());
    double l1 = 0.0;
    for (double v : x) l1 += std::abs(v);
    if (l1 <= radius) return x;

    std::vector<double> best;
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<int> sign(p, -1);  // each in {-1, 0, 1}
    const long total = static_cast<long>(std::pow(3.0, p));
    for (long code = 0; code < total; ++code) {
        long c = code;
        int support = 0;
        double active_sum = 0.0;
        for (int i = 0; i < p; ++i) {
            sign[i] = static_cast<int>(c % 3) - 1;
            c /= 3;
            if (sign[i] != 0) {
                ++support;
                active_sum += sign[i] * x[i];
            }
        }
        if (support == 0) continue;
        const double theta = (active_sum - radius) / support;
        if (theta < -1e-12) continue;  // constraint must be active here
        bool feasible = true;
        std::vector<double> cand(p, 0.0);
        double obj = 0.0;
        for (int i = 0; i < p && feasible; ++i) {
            if (sign[i] != 0) {
                cand[i] = x[i] - theta * sign[i];
                if (sign[i] * cand[i] < -1e-12) feasible = false;
                obj += theta * theta;
            } else {
                if (std::abs(x[i]) > theta + 1e-12) feasible = false;
                obj += x[i] * x[i];
            }
        }
        if (feasible && obj < best_obj) {
            best_obj = obj;
            best = cand;
        }
    }
    return best;
}

// --------------------------------------------------------------- samplers

inline spca::SymMatrix random_symmetric(spca::Rng& rng, int p, double scale = 1.0) {
    spca::Matrix raw(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) raw(i, j) = scale * rng.normal();
    return spca::SymMatrix::symmetrized(raw);
}

inline spca::SymMatrix random_psd(spca::Rng& rng, int p, double scale = 1.0) {
    spca::Matrix b(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) b(i, j) = rng.normal();
    spca::Matrix raw(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            double s = 0.0;
            for (int k = 0; k < p; ++k) s += b(i, k) * b(j, k);
            raw(i, j) = scale * s / p;
        }
    return spca::SymMatrix::symmetrized(raw);
}

inline spca::Vector random_unit(spca::Rng& rng, int p) {
    spca::Vector v(p);
    double n = 0.0;
    do {
        for (int i = 0; i < p; ++i) v[i] = rng.normal();
        n = spca::norm2(v);
    } while (n < 1e-8);
    for (double& x : v) x /= n;
    return v;
}

/// Uniform-ish point of the simplex {z >= 0, sum z = r} (Dirichlet(1)).
inline std::vector<double> random_simplex_point(spca::Rng& rng, int p, double r) {
    std::vector<double> z(p);
    double s = 0.0;
    for (int i = 0; i < p; ++i) {
        z[i] = -std::log(1.0 - rng.uniform());
        s += z[i];
    }
    for (double& v : z) v *= r / s;
    return z;
}

/// Random point with l1 norm at most r.
inline std::vector<double> random_l1_point(spca::Rng& rng, int p, double r) {
    std::vector<double> z = random_simplex_point(rng, p, r * rng.uniform());
    for (double& v : z)
        if (rng.uniform() < 0.5) v = -v;
    return z;
}

/// Random PSD matrix with unit trace (a spectahedron member).
inline spca::SymMatrix random_spectahedron_point(spca::Rng& rng, int p) {
    spca::SymMatrix w = random_psd(rng, p);
    const double t = spca::trace(w);
    return (1.0 / t) * w;
}

}  // namespace oracles
