#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <cmath>

#include <Eigen/Dense>

namespace elwave {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec2c = Eigen::Vector2<Complex>;
using Mat2 = Eigen::Matrix2d;
using Mat2c = Eigen::Matrix2<Complex>;
using Mat3c = Eigen::Matrix3<Complex>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr Complex iu{0.0, 1.0};

/// Thrown when an argument is outside a function's domain (t <= 0, |n| too large, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when a requested value exceeds representable magnitude.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Geometry violations: curve overlap, non-positive radius, containment failures.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal consistency violations (invariants the math guarantees).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline double sqr(double x) { return x * x; }

} // namespace elwave
