#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace heatlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation not available for this kind of group.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Bad argument (t <= 0, malformed descriptor, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A truncated series cannot certify the requested accuracy.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// A configured size cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Stored data violates a structural invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Two independent routes to the same quantity disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace heatlab
