// types.hpp - Common numeric types and error reporting
//
// All vectors and matrices are dense complex double precision. Block sizes
// of interest are small (n <= 4096), so dense storage is used everywhere.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace afdm {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class ErrorCode {
    InvalidSize,
    InvalidParameter,
    InvalidConfiguration,
    Unsupported,
    Numerical,
    InsufficientErrors,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Raised when a linear solve is too ill-conditioned to trust.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double condition_estimate)
        : Error(ErrorCode::Numerical, what), condition_estimate_(condition_estimate) {}

    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

// exp(-j*2*pi*turns), with the argument reduced to [-0.5, 0.5] first so that
// large quadratic-phase arguments keep their fractional precision.
inline Complex phasor_neg(double turns) {
    const double r = std::remainder(turns, 1.0);
    return std::polar(1.0, -kTwoPi * r);
}

inline Complex phasor(double turns) {
    const double r = std::remainder(turns, 1.0);
    return std::polar(1.0, kTwoPi * r);
}

// a * b reduced to [-0.5, 0.5] turns, keeping the rounding error of the
// product (recovered with fma) so that c * k^2 stays accurate for large k.
inline double product_turns(double a, double b) {
    const double p = a * b;
    const double err = std::fma(a, b, -p);
    return std::remainder(std::remainder(p, 1.0) + err, 1.0);
}

}  // namespace afdm
