#include "owl/norm.hpp"

#include "owl/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace owl {

std::vector<Eigen::Index> magnitude_order(const VectorRef& x) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::fabs(x[a]) > std::fabs(x[b]);
  });
  return order;
}

Vector sorted_magnitudes(const VectorRef& x) {
  Vector m = x.cwiseAbs();
  std::sort(m.begin(), m.end(), std::greater<>());
  return m;
}

double owl_norm(const VectorRef& x, const WeightVector& w) {
  detail::require_same_size(x.size(), w.size(), "owl_norm");
  return w.values().dot(sorted_magnitudes(x));
}

CoefficientVector prox_owl(const VectorRef& u, const WeightVector& w, double scale) {
  detail::require_same_size(u.size(), w.size(), "prox_owl");
  const auto order = magnitude_order(u);
  const Eigen::Index p = u.size();

  std::vector<double> shifted(static_cast<std::size_t>(p));
  for (Eigen::Index k = 0; k < p; ++k) {
    shifted[static_cast<std::size_t>(k)] = std::fabs(u[order[k]]) - scale * w[k];
  }
  const std::vector<double> fitted = isotonic_nonincreasing_nonnegative(shifted);

  CoefficientVector x(p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const Eigen::Index idx = order[k];
    x[idx] = std::copysign(fitted[static_cast<std::size_t>(k)], u[idx]);
  }
  return x;
}

CoefficientVector pigou_dalton_transfer(const VectorRef& x, Eigen::Index i, Eigen::Index j,
                                        double amount) {
  const Eigen::Index p = x.size();
  if (i < 0 || j < 0 || i >= p || j >= p || i == j) {
    throw std::invalid_argument("pigou_dalton_transfer: indices out of range or equal");
  }
  if ((x.array() < 0.0).any()) {
    throw std::invalid_argument("pigou_dalton_transfer: entries must be non-negative");
  }
  if (!(x[i] > x[j])) {
    throw std::invalid_argument("pigou_dalton_transfer: requires x_i > x_j");
  }
  if (!(amount > 0.0 && amount < 0.5 * (x[i] - x[j]))) {
    throw std::invalid_argument("pigou_dalton_transfer: amount must lie in (0, (x_i - x_j)/2)");
  }
  CoefficientVector z = x;
  z[i] -= amount;
  z[j] += amount;
  return z;
}

}  // namespace owl
