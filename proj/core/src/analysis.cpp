#include "owl/analysis.hpp"

#include "owl/norm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace owl {

std::size_t ClusterReport::cluster_of(Eigen::Index j) const {
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const auto& m = clusters[k].members;
    if (std::binary_search(m.begin(), m.end(), j)) {
      return k;
    }
  }
  throw std::out_of_range("ClusterReport::cluster_of: index not present");
}

ClusterReport detect_clusters(const VectorRef& x, double tol) {
  if (!(tol >= 0.0)) {
    throw std::invalid_argument("detect_clusters: tol must be >= 0");
  }
  ClusterReport report;
  report.tol = tol;
  for (Eigen::Index idx : magnitude_order(x)) {
    const double m = std::fabs(x[idx]);
    if (report.clusters.empty() || report.clusters.back().magnitude - m > tol) {
      report.clusters.push_back({{}, m});
    }
    report.clusters.back().members.push_back(idx);
  }
  for (auto& c : report.clusters) {
    std::sort(c.members.begin(), c.members.end());
  }
  return report;
}

int sign_of(double v) noexcept { return v < 0.0 ? -1 : 1; }

bool check_sq_condition(const VectorRef& y, const VectorRef& ai, const VectorRef& aj, int si,
                        int sj, double delta) {
  detail::require_same_size(ai.size(), y.size(), "check_sq_condition");
  detail::require_same_size(aj.size(), y.size(), "check_sq_condition");
  return y.norm() * (si * ai - sj * aj).norm() < delta;
}

bool check_sq_condition_all_signs(const VectorRef& y, const VectorRef& ai, const VectorRef& aj,
                                  double delta) {
  for (int si : {1, -1}) {
    for (int sj : {1, -1}) {
      if (!check_sq_condition(y, ai, aj, si, sj, delta)) {
        return false;
      }
    }
  }
  return true;
}

bool check_abs_condition(const VectorRef& ai, const VectorRef& aj, int si, int sj, double delta) {
  detail::require_same_size(ai.size(), aj.size(), "check_abs_condition");
  return (si * ai - sj * aj).lpNorm<1>() < delta;
}

bool check_abs_condition_all_signs(const VectorRef& ai, const VectorRef& aj, double delta) {
  for (int si : {1, -1}) {
    for (int sj : {1, -1}) {
      if (!check_abs_condition(ai, aj, si, sj, delta)) {
        return false;
      }
    }
  }
  return true;
}

bool correlation_sq_condition(double y_norm, double rho, int sign_product, double delta) {
  return y_norm * std::sqrt(std::max(0.0, 2.0 - 2.0 * rho * sign_product)) < delta;
}

bool correlation_abs_condition(Eigen::Index n, double rho, int sign_product, double delta) {
  return std::sqrt(static_cast<double>(n) * std::max(0.0, 2.0 - 2.0 * rho * sign_product)) <
         delta;
}

std::vector<PairCheck> verify_clustering(const MatrixRef& a, const VectorRef& y,
                                         const VectorRef& x, const WeightVector& w, Loss loss,
                                         double cluster_tol) {
  detail::require_same_size(a.rows(), y.size(), "verify_clustering");
  detail::require_same_size(a.cols(), x.size(), "verify_clustering");
  detail::require_same_size(a.cols(), w.size(), "verify_clustering");
  const double delta = w.delta();
  const Vector norms = a.colwise().norm().transpose();
  std::vector<PairCheck> out;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      PairCheck pc;
      pc.i = i;
      pc.j = j;
      const int si = sign_of(x[i]);
      const int sj = sign_of(x[j]);
      if (loss == Loss::SquaredL2) {
        const bool common_norm =
            std::fabs(norms[i] - norms[j]) <= 1e-9 * std::max({norms[i], norms[j], 1e-300});
        pc.condition = common_norm && check_sq_condition(y, a.col(i), a.col(j), si, sj, delta);
      } else {
        pc.condition = check_abs_condition(a.col(i), a.col(j), si, sj, delta);
      }
      pc.magnitude_gap = std::fabs(std::fabs(x[i]) - std::fabs(x[j]));
      pc.clustered = pc.magnitude_gap <= cluster_tol;
      out.push_back(pc);
    }
  }
  return out;
}

double c_metric(const VectorRef& x_hat, const VectorRef& x_star, const MatrixRef& c) {
  detail::require_same_size(x_hat.size(), x_star.size(), "c_metric");
  detail::require_same_size(c.cols(), x_hat.size(), "c_metric");
  return (c * (x_hat - x_star)).norm();
}

Vector group_z(const VectorRef& x, const GroupStructure& gs) {
  detail::require_same_size(x.size(), gs.p(), "group_z");
  Vector z = Vector::Zero(gs.q());
  for (Eigen::Index j = 0; j < gs.p(); ++j) {
    z[gs.group_of(j)] += gs.signs()[static_cast<std::size_t>(j)] * x[j];
  }
  return z;
}

double matrix_l1_norm(const MatrixRef& c) {
  if (c.cols() == 0) {
    return 0.0;
  }
  return c.cwiseAbs().colwise().sum().maxCoeff();
}

double bound_rhs(const BoundInputs& b, BoundVariant variant) {
  const double dim = variant == BoundVariant::IdentityP ? b.p : b.q;
  if (dim < 2.0) {
    throw std::invalid_argument("bound_rhs: dimension must be >= 2 so that log(dim) > 0");
  }
  if (!(b.n >= 1.0) || !(b.s >= 0.0) || !(b.epsilon >= 0.0) || !(b.w1_over_wbar >= 1.0 - 1e-12) ||
      !(b.c_l1_norm > 0.0)) {
    throw std::invalid_argument("bound_rhs: invalid inputs");
  }
  const double c_norm = variant == BoundVariant::GeneralQ ? b.c_l1_norm : 1.0;
  const double width = 4.0 * std::numbers::sqrt2 * c_norm * b.w1_over_wbar *
                       std::sqrt(b.s * std::log(dim) / b.n);
  return std::sqrt(2.0 * std::numbers::pi) * (width + b.epsilon);
}

}  // namespace owl
