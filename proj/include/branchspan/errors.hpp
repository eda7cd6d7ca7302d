#pragma once

#include <charconv>
#include <stdexcept>
#include <string>

namespace branchspan {

/// Shortest round-trip text for a double, independent of locale.
inline std::string format_number(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// Base class of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-domain scalar input.
class invalid_parameter : public error {
public:
    using error::error;
};

/// Operands with incompatible mode counts or vector lengths.
class dimension_mismatch : public error {
public:
    using error::error;
};

/// Operation only defined for a restricted number of modes.
class unsupported_dimension : public error {
public:
    using error::error;
};

/// Covariance fails symmetry, the uncertainty relation, or purity.
class unphysical_covariance : public error {
public:
    using error::error;
};

/// Position block of the covariance is numerically singular.
class degenerate_covariance : public error {
public:
    using error::error;
};

/// The Gaussian integral for a pair of branches has a vanishing determinant.
class degenerate_pair : public error {
public:
    using error::error;
};

/// A superposition whose norm vanishes (destructive interference).
class degenerate_state : public error {
public:
    using error::error;
};

/// Matrix handed in as a density matrix violates Hermiticity, trace or positivity.
class invalid_state : public error {
public:
    using error::error;
};

/// Branches are (numerically) linearly dependent. Carries the offending eigenvalue.
class near_dependence : public error {
public:
    near_dependence(const std::string& what, double eigenvalue)
        : error(what), eigenvalue_(eigenvalue) {}

    [[nodiscard]] double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

} // namespace branchspan
