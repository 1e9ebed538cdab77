#pragma once

#include "owl/types.hpp"
#include "owl/weights.hpp"

#include <vector>

namespace owl {

/// Omega_w(x) = sum_i w_i |x|_[i], where |x|_[i] is the i-th largest magnitude.
double owl_norm(const VectorRef& x, const WeightVector& w);

/// Indices ordering |x| non-increasingly. Stable, so equal magnitudes keep
/// their index order.
std::vector<Eigen::Index> magnitude_order(const VectorRef& x);

/// |x| sorted non-increasingly.
Vector sorted_magnitudes(const VectorRef& x);

/// Proximal operator of scale * Omega_w:
///   argmin_x 0.5 * ||x - u||^2 + scale * Omega_w(x).
///
/// Sorts |u|, subtracts the weights, projects onto non-increasing
/// non-negative sequences (pool adjacent violators + clamp) and undoes the
/// permutation and signs. O(p log p).
CoefficientVector prox_owl(const VectorRef& u, const WeightVector& w, double scale = 1.0);

/// Pigou-Dalton transfer on a non-negative vector: moves `amount` from
/// entry i to entry j. Requires x_i > x_j >= 0, all entries non-negative
/// and 0 < amount < (x_i - x_j) / 2; throws std::invalid_argument otherwise.
/// Indices are zero-based.
CoefficientVector pigou_dalton_transfer(const VectorRef& x, Eigen::Index i, Eigen::Index j,
                                        double amount);

}  // namespace owl
