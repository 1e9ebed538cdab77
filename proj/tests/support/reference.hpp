#pragma once

// Independent reference computations used as test oracles. Nothing here
// calls the prox, the isotonic fit or the solvers under test.

#include "owl/types.hpp"
#include "owl/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace owltest {

using owl::Matrix;
using owl::Vector;

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index p, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector v(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    v[i] = nd(rng);
  }
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, j) = nd(rng);
    }
  }
  return m;
}

/// Random valid weights: sorted uniform draws, occasionally with ties or
/// zero tail entries.
inline owl::WeightVector random_weights(std::mt19937_64& rng, Eigen::Index p,
                                        double top = 1.5) {
  std::uniform_real_distribution<double> ud(0.0, top);
  std::vector<double> w(static_cast<std::size_t>(p));
  for (auto& v : w) {
    v = ud(rng);
  }
  std::uniform_int_distribution<int> pick(0, 9);
  if (p > 1 && pick(rng) == 0) {
    w[1] = w[0];
  }
  if (p > 2 && pick(rng) == 0) {
    w.back() = 0.0;
  }
  std::sort(w.begin(), w.end(), std::greater<>());
  w[0] = std::max(w[0], 1e-3);
  return owl::WeightVector(w);
}

/// Omega_w(x) by a plain sort of a copy.
inline double naive_owl(const Vector& x, const owl::WeightVector& w) {
  std::vector<double> m(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    m[static_cast<std::size_t>(i)] = std::fabs(x[i]);
  }
  std::sort(m.begin(), m.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += w[static_cast<Eigen::Index>(i)] * m[i];
  }
  return s;
}

/// A subgradient of Omega_w at x: the weight of rank k goes to the k-th
/// largest magnitude, signed by x (0 at zero entries).
inline Vector owl_subgradient(const Vector& x, const owl::WeightVector& w) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::fabs(x[a]) > std::fabs(x[b]);
  });
  Vector g = Vector::Zero(x.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const Eigen::Index i = idx[k];
    const double s = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
    g[i] = s * w[static_cast<Eigen::Index>(k)];
  }
  return g;
}

/// argmin 0.5 ||x - u||^2 + Omega_w(x) by subgradient descent with the
/// diminishing step 1/k, which suits the unit strong convexity: the iterate
/// is then the running mean of u - g_k.
inline Vector subgradient_prox(const Vector& u, const owl::WeightVector& w, long steps) {
  Vector x = Vector::Zero(u.size());
  for (long k = 1; k <= steps; ++k) {
    const Vector g = x - u + owl_subgradient(x, w);
    x -= g / static_cast<double>(k);
  }
  return x;
}

/// Cyclic coordinate descent on 0.5 ||Ax - y||^2 + lambda ||x||_1 with
/// explicit soft-thresholding, run until no coordinate moves by more than
/// `tol`.
inline Vector lasso_coordinate_descent(const Matrix& a, const Vector& y, double lambda,
                                       double tol = 1e-14, int max_sweeps = 1000000) {
  const Eigen::Index p = a.cols();
  Vector x = Vector::Zero(p);
  Vector r = y;
  const Vector col_sq = a.colwise().squaredNorm().transpose();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_sq[j] == 0.0) {
        continue;
      }
      const double rho = a.col(j).dot(r) + col_sq[j] * x[j];
      const double mag = std::max(std::fabs(rho) - lambda, 0.0);
      const double next = std::copysign(mag, rho) / col_sq[j];
      const double d = next - x[j];
      if (d != 0.0) {
        r -= d * a.col(j);
        x[j] = next;
        moved = std::max(moved, std::fabs(d));
      }
    }
    if (moved <= tol) {
      break;
    }
  }
  return x;
}

}  // namespace owltest
