#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spca/errors.hpp"
#include "spca/linalg.hpp"
#include "spca/matrix.hpp"
#include "spca/rng.hpp"

namespace spca {

/// Sample covariance M M' of a p x n data matrix whose rows are variables.
/// With center set, row means are subtracted first. No 1/n scaling, so
/// loaders and generators agree on the same convention.
inline SymMatrix covariance_from_data(const Matrix& m, bool center) {
    const int p = m.rows(), n = m.cols();
    if (n < 1) throw DimensionMismatch("data matrix needs at least one sample");
    Matrix work = m;
    if (center) {
        for (int i = 0; i < p; ++i) {
            double mean = 0.0;
            for (int j = 0; j < n; ++j) mean += work(i, j);
            mean /= n;
            for (int j = 0; j < n; ++j) work(i, j) -= mean;
        }
    }
    Matrix raw(p, p);
    for (int i = 0; i < p; ++i)
        for (int k = i; k < p; ++k) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += work(i, j) * work(k, j);
            raw(i, k) = raw(k, i) = s;
        }
    return SymMatrix::symmetrized(raw);
}

/// Exact covariance of the ten-variable three-factor model
///   V1 ~ N(0, 290),  V2 ~ N(0, 300),  V3 = -0.3 V1 + 0.925 V2 + eps,
/// observed through X_1..4 = V1 + noise, X_5..8 = V2 + noise,
/// X_9..10 = V3 + noise, all noises independent unit normals.
inline SymMatrix zou_covariance() {
    const double var_v1 = 290.0;
    const double var_v2 = 300.0;
    const double a = -0.3, b = 0.925;
    const double var_v3 = a * a * var_v1 + b * b * var_v2 + 1.0;
    const double cov_13 = a * var_v1;   // Cov(V1, V3)
    const double cov_23 = b * var_v2;   // Cov(V2, V3)

    SymMatrix s(10);
    auto block = [&](int lo, int hi, double var) {
        for (int i = lo; i < hi; ++i)
            for (int j = lo; j < hi; ++j) s(i, j) = var + (i == j ? 1.0 : 0.0);
    };
    block(0, 4, var_v1);
    block(4, 8, var_v2);
    block(8, 10, var_v3);
    for (int i = 0; i < 4; ++i)
        for (int j = 8; j < 10; ++j) s(i, j) = s(j, i) = cov_13;
    for (int i = 4; i < 8; ++i)
        for (int j = 8; j < 10; ++j) s(i, j) = s(j, i) = cov_23;
    return s;
}

/// A sparse rank-one signal plus low-rank noise, the standard synthetic
/// support-recovery benchmark.
struct SpikedInstance {
    SymMatrix sigma;
    std::vector<int> support;   // sorted indices of the planted spike
};

/// Sigma = xhat xhat' + noise_sigma * v v', where xhat has s standard
/// normal entries on a uniformly drawn support and v has entries uniform
/// on [0, 1). Deterministic for a fixed seed.
inline SpikedInstance spiked_covariance(int p, int s, double noise_sigma, std::uint64_t seed) {
    if (s < 1 || s > p) throw DimensionMismatch("spike sparsity must satisfy 0 < s <= p");
    if (noise_sigma < 0.0) throw DimensionMismatch("noise level must be nonnegative");
    Rng rng(seed);
    std::vector<int> support = rng.sample_indices(p, s);
    std::sort(support.begin(), support.end());
    Vector xhat(p, 0.0);
    for (int idx : support) xhat[idx] = rng.normal();
    Vector v(p);
    for (int i = 0; i < p; ++i) v[i] = rng.uniform();
    Matrix raw(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) raw(i, j) = xhat[i] * xhat[j] + noise_sigma * v[i] * v[j];
    return {SymMatrix::symmetrized(raw), std::move(support)};
}

// ---------------------------------------------------------------------------
// File loaders. All are line-oriented CSV; parse failures carry the
// offending 1-based line number.
// ---------------------------------------------------------------------------

namespace detail {

inline double parse_double(std::string_view tok, long line) {
    // std::from_chars<double> tolerates no surrounding spaces; trim first.
    size_t b = tok.find_first_not_of(" \t\r");
    size_t e = tok.find_last_not_of(" \t\r");
    if (b == std::string_view::npos) throw ParseError("empty field", line);
    tok = tok.substr(b, e - b + 1);
    double value = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ParseError("cannot parse number '" + std::string(tok) + "'", line);
    return value;
}

inline std::vector<std::string_view> split_fields(std::string_view s) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t comma = s.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
}

inline std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file '" + path + "'", 0);
    return in;
}

inline bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace detail

/// Rectangular CSV of decimal floats, one matrix row per line, no header.
inline Matrix load_data_csv(const std::string& path) {
    std::ifstream in = detail::open_or_throw(path);
    std::vector<Vector> rows;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank(line)) continue;
        auto fields = detail::split_fields(line);
        Vector row;
        row.reserve(fields.size());
        for (auto f : fields) row.push_back(detail::parse_double(f, lineno));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("row has " + std::to_string(row.size()) + " fields, expected " +
                                 std::to_string(rows.front().size()),
                             lineno);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("file '" + path + "' contains no data", lineno);
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.front().size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

/// Square symmetric CSV; asymmetry beyond 1e-9 is an error, smaller drift
/// is symmetrized away.
inline SymMatrix load_covariance_csv(const std::string& path) {
    Matrix m = load_data_csv(path);
    if (m.rows() != m.cols())
        throw DimensionMismatch("covariance file '" + path + "' is not square");
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-9)
                throw AsymmetricInput("covariance file '" + path + "' is asymmetric at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
    return SymMatrix::symmetrized(m);
}

/// Sparse triplet file, lines "row,col,value" with 0-based indices.
/// When first_line_is_dims is set, a leading "p,n" line supplies the
/// shape and the p/n arguments are ignored.
inline Matrix load_triplets(const std::string& path, int p, int n, bool first_line_is_dims = false) {
    std::ifstream in = detail::open_or_throw(path);
    std::string line;
    long lineno = 0;
    if (first_line_is_dims) {
        if (!std::getline(in, line)) throw ParseError("missing dimension header", 1);
        ++lineno;
        auto fields = detail::split_fields(line);
        if (fields.size() != 2) throw ParseError("dimension header must be 'p,n'", lineno);
        p = static_cast<int>(detail::parse_double(fields[0], lineno));
        n = static_cast<int>(detail::parse_double(fields[1], lineno));
    }
    if (p < 1 || n < 1) throw DimensionMismatch("triplet matrix shape must be positive");
    Matrix m(p, n);
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank(line)) continue;
        auto fields = detail::split_fields(line);
        if (fields.size() != 3) throw ParseError("expected 'row,col,value'", lineno);
        const int i = static_cast<int>(detail::parse_double(fields[0], lineno));
        const int j = static_cast<int>(detail::parse_double(fields[1], lineno));
        if (i < 0 || i >= p || j < 0 || j >= n)
            throw ParseError("index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range", lineno);
        m(i, j) = detail::parse_double(fields[2], lineno);
    }
    return m;
}

/// Vote matrix (bills as rows, entries in {-1, 0, 1}) with optional
/// first-row column labels.
struct VotesData {
    Matrix votes;
    std::vector<std::string> labels;   // empty when the file has no label row
};

inline VotesData load_votes_csv(const std::string& path, bool first_row_labels) {
    std::ifstream in = detail::open_or_throw(path);
    VotesData out;
    std::string line;
    long lineno = 0;
    std::vector<Vector> rows;
    if (first_row_labels) {
        if (!std::getline(in, line)) throw ParseError("missing label row", 1);
        ++lineno;
        for (auto f : detail::split_fields(line)) {
            size_t b = f.find_first_not_of(" \t\r");
            size_t e = f.find_last_not_of(" \t\r");
            out.labels.emplace_back(b == std::string_view::npos ? "" : f.substr(b, e - b + 1));
        }
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank(line)) continue;
        auto fields = detail::split_fields(line);
        Vector row;
        row.reserve(fields.size());
        for (auto f : fields) {
            const double v = detail::parse_double(f, lineno);
            if (v != -1.0 && v != 0.0 && v != 1.0)
                throw ParseError("vote entries must be -1, 0 or 1", lineno);
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("inconsistent column count", lineno);
        if (!out.labels.empty() && row.size() != out.labels.size())
            throw ParseError("column count does not match the label row", lineno);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("file '" + path + "' contains no votes", lineno);
    out.votes = Matrix(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.front().size(); ++j)
            out.votes(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return out;
}

/// Keeps the bills (rows) with at most max_missing zero entries,
/// preserving order.
inline Matrix filter_bills(const Matrix& votes, int max_missing) {
    std::vector<int> keep;
    for (int i = 0; i < votes.rows(); ++i) {
        int missing = 0;
        for (int j = 0; j < votes.cols(); ++j)
            if (votes(i, j) == 0.0) ++missing;
        if (missing <= max_missing) keep.push_back(i);
    }
    Matrix out(static_cast<int>(keep.size()), votes.cols());
    for (size_t i = 0; i < keep.size(); ++i)
        for (int j = 0; j < votes.cols(); ++j) out(static_cast<int>(i), j) = votes(keep[i], j);
    return out;
}

/// Least-squares coefficients of every column of m against the span of
/// (v1, v2), in column order.
inline std::vector<std::pair<double, double>> project_columns_2d(const Matrix& m, const Vector& v1,
                                                                 const Vector& v2) {
    if (static_cast<int>(v1.size()) != m.rows() || v1.size() != v2.size())
        throw DimensionMismatch("basis vectors must match the data row count");
    Matrix basis(m.rows(), 2);
    for (int i = 0; i < m.rows(); ++i) {
        basis(i, 0) = v1[i];
        basis(i, 1) = v2[i];
    }
    std::vector<std::pair<double, double>> points;
    points.reserve(m.cols());
    for (int j = 0; j < m.cols(); ++j) points.push_back(lstsq_2col(basis, m.col(j)));
    return points;
}

/// Full-precision CSV writers; a written matrix reloads bit-exactly.
inline void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file '" + path + "'");
    char buf[32];
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

inline void write_covariance_csv(const std::string& path, const SymMatrix& s) {
    Matrix m(s.dim(), s.dim());
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.dim(); ++j) m(i, j) = s(i, j);
    write_matrix_csv(path, m);
}

}  // namespace spca
