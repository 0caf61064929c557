#pragma once

#include <stdexcept>
#include <string>

namespace spca {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input contains NaN or Inf entries.
class NonFinite : public Error {
public:
    using Error::Error;
};

/// Iterative eigensolver exceeded its iteration cap.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Matrix passed to a Cholesky factorization is not positive semidefinite.
class NotPsd : public Error {
public:
    using Error::Error;
};

/// Least-squares basis is numerically singular.
class DegenerateBasis : public Error {
public:
    using Error::Error;
};

/// Deflation direction carries no variance (x'Sx ~ 0).
class DegenerateDirection : public Error {
public:
    using Error::Error;
};

/// Malformed input file; message names the offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// Covariance file violates the symmetry tolerance.
class AsymmetricInput : public Error {
public:
    using Error::Error;
};

/// Shapes of the supplied operands do not agree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace spca
