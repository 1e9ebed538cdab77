#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace owl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Regression coefficients x. Any vector of finite reals; lengths are checked
/// at each joint use against the weights and the design.
using CoefficientVector = Vector;

using VectorRef = Eigen::Ref<const Vector>;
using MatrixRef = Eigen::Ref<const Matrix>;

/// Operand lengths or matrix shapes disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A constrained problem whose residual bound cannot be met by any x.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_same_size(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace detail
}  // namespace owl
