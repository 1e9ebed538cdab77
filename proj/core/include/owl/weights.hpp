#pragma once

#include "owl/types.hpp"

#include <cstddef>
#include <vector>

namespace owl {

/// Validated OWL weights w1 >= w2 >= ... >= wp >= 0 with w1 > 0.
///
/// The minimum consecutive gap (delta), the mean and the leading weight are
/// cached at construction. For p == 1 there is no consecutive pair and delta
/// is defined as w1. Instances are immutable.
class WeightVector {
 public:
  /// Throws std::invalid_argument unless the sequence is non-empty, finite,
  /// non-increasing, non-negative and has a strictly positive first entry.
  explicit WeightVector(Vector w);
  explicit WeightVector(const std::vector<double>& w);

  const Vector& values() const noexcept { return w_; }
  Eigen::Index size() const noexcept { return w_.size(); }
  double operator[](Eigen::Index i) const { return w_[i]; }

  double delta() const noexcept { return delta_; }
  double mean() const noexcept { return mean_; }
  double max() const noexcept { return w_[0]; }

  /// w1 / w-bar; always >= 1.
  double max_over_mean() const noexcept { return w_[0] / mean_; }

  /// Weights multiplied by a positive factor (used for step-scaled prox calls
  /// and Lagrangian rescaling).
  WeightVector scaled(double factor) const;

 private:
  Vector w_;
  double delta_ = 0.0;
  double mean_ = 0.0;
};

/// OSCAR weights w_i = lambda1 + lambda2 * (p - i), i = 1..p.
WeightVector oscar_weights(std::size_t p, double lambda1, double lambda2);

/// Constant weights (lambda, ..., lambda); the OWL norm becomes lambda * l1.
WeightVector uniform_weights(std::size_t p, double lambda);

/// SLOPE-style weights w_i = Phi^{-1}(1 - i q / (2p)) for 0 < q < 1.
WeightVector slope_weights(std::size_t p, double q);

double min_gap(const WeightVector& w) noexcept;

/// Standard normal quantile Phi^{-1}(prob) for prob in (0, 1).
/// Wichura's AS 241 (PPND16) rational approximation, relative error ~1e-16.
double normal_quantile(double prob);

}  // namespace owl
