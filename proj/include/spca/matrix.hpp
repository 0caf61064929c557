#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "spca/errors.hpp"

namespace spca {

using Vector = std::vector<double>;

/// Dense row-major matrix. General shape; no symmetry assumption.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {
        if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimension");
    }
    Matrix(int rows, int cols, Vector entries) : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != static_cast<size_t>(rows) * cols)
            throw DimensionMismatch("entry count does not match matrix shape");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    std::span<double> row(int i) { return {a_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }
    std::span<const double> row(int i) const {
        return {a_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
    }
    std::span<double> data() { return a_; }
    std::span<const double> data() const { return a_; }

    Vector col(int j) const {
        Vector c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    Vector a_;
};

inline bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Symmetric p x p matrix of doubles. Construction symmetrizes as (A + A')/2
/// and rejects non-finite entries, so downstream code can rely on exact
/// entrywise symmetry. Row-major full storage.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int p) : dim_(p), a_(static_cast<size_t>(p) * p, 0.0) {
        if (p <= 0) throw DimensionMismatch("symmetric matrix dimension must be positive");
    }

    /// Builds from arbitrary square entries, symmetrizing drift away.
    static SymMatrix symmetrized(const Matrix& m) {
        if (m.rows() != m.cols()) throw DimensionMismatch("matrix is not square");
        SymMatrix s(m.rows());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j <= i; ++j) {
                const double v = 0.5 * (m(i, j) + m(j, i));
                s(i, j) = v;
                s(j, i) = v;
            }
        s.check_finite();
        return s;
    }

    static SymMatrix identity(int p) {
        SymMatrix s(p);
        for (int i = 0; i < p; ++i) s(i, i) = 1.0;
        return s;
    }

    static SymMatrix diagonal(const Vector& d) {
        SymMatrix s(static_cast<int>(d.size()));
        for (size_t i = 0; i < d.size(); ++i) s(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return s;
    }

    /// Rank-one matrix v v'.
    static SymMatrix outer(const Vector& v) {
        SymMatrix s(static_cast<int>(v.size()));
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = 0; j < v.size(); ++j) s.a_[i * v.size() + j] = v[i] * v[j];
        return s;
    }

    int dim() const { return dim_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
    std::span<double> data() { return a_; }
    std::span<const double> data() const { return a_; }

    void check_finite() const {
        if (!all_finite(a_)) throw NonFinite("matrix contains NaN or Inf");
    }

private:
    int dim_ = 0;
    Vector a_;
};

inline void require_same_dim(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("symmetric matrices differ in dimension");
}

inline double trace(const SymMatrix& a) {
    double t = 0.0;
    for (int i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

inline double inner(const SymMatrix& a, const SymMatrix& b) {
    require_same_dim(a, b);
    double s = 0.0;
    auto pa = a.data(), pb = b.data();
    for (size_t i = 0; i < pa.size(); ++i) s += pa[i] * pb[i];
    return s;
}

inline double frobenius_norm(const SymMatrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

/// Entrywise l1 norm, sum_ij |A_ij|.
inline double entry_l1_norm(const SymMatrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += std::abs(x);
    return s;
}

inline double max_abs(const SymMatrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

inline SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    require_same_dim(a, b);
    SymMatrix c = a;
    auto pc = c.data();
    auto pb = b.data();
    for (size_t i = 0; i < pc.size(); ++i) pc[i] += pb[i];
    return c;
}

inline SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    require_same_dim(a, b);
    SymMatrix c = a;
    auto pc = c.data();
    auto pb = b.data();
    for (size_t i = 0; i < pc.size(); ++i) pc[i] -= pb[i];
    return c;
}

inline SymMatrix operator*(double s, const SymMatrix& a) {
    SymMatrix c = a;
    for (double& x : c.data()) x *= s;
    return c;
}

inline Vector multiply(const SymMatrix& a, const Vector& v) {
    if (static_cast<int>(v.size()) != a.dim()) throw DimensionMismatch("matrix-vector shape mismatch");
    Vector out(v.size(), 0.0);
    for (int i = 0; i < a.dim(); ++i) {
        double s = 0.0;
        auto row = a.data().subspan(static_cast<size_t>(i) * a.dim(), a.dim());
        for (int j = 0; j < a.dim(); ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

inline double quadratic_form(const SymMatrix& a, const Vector& v) {
    Vector av = multiply(a, v);
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) s += v[i] * av[i];
    return s;
}

inline double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

}  // namespace spca
