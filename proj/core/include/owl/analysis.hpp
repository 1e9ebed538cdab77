#pragma once

#include "owl/datagen.hpp"
#include "owl/solvers.hpp"
#include "owl/types.hpp"
#include "owl/weights.hpp"

#include <vector>

namespace owl {

struct Cluster {
  /// Zero-based column indices, ascending.
  std::vector<Eigen::Index> members;
  /// Largest magnitude in the cluster.
  double magnitude = 0.0;
};

/// Partition of the coordinates by magnitude, largest magnitudes first.
struct ClusterReport {
  std::vector<Cluster> clusters;
  double tol = 0.0;

  /// Index into `clusters` of coordinate j.
  std::size_t cluster_of(Eigen::Index j) const;
};

/// Groups coordinates whose magnitudes agree within `tol`. Magnitudes are
/// scanned in decreasing order and a new cluster starts whenever a magnitude
/// falls more than `tol` below the current cluster's largest one, so every
/// pair inside a cluster is within tol and consecutive clusters' leading
/// magnitudes differ by more than tol.
ClusterReport detect_clusters(const VectorRef& x, double tol = 1e-6);

/// sign(v) with sign(0) = +1.
int sign_of(double v) noexcept;

/// ||y||_2 ||s_i a_i - s_j a_j||_2 < delta (squared-loss clustering condition).
bool check_sq_condition(const VectorRef& y, const VectorRef& ai, const VectorRef& aj, int si,
                        int sj, double delta);
/// Holds for every sign pattern; usable before the solution is known.
bool check_sq_condition_all_signs(const VectorRef& y, const VectorRef& ai, const VectorRef& aj,
                                  double delta);

/// ||s_i a_i - s_j a_j||_1 < delta (absolute-loss clustering condition).
bool check_abs_condition(const VectorRef& ai, const VectorRef& aj, int si, int sj, double delta);
bool check_abs_condition_all_signs(const VectorRef& ai, const VectorRef& aj, double delta);

/// Normalized-column forms: ||y||_2 sqrt(2 - 2 rho s) < delta and
/// sqrt(n (2 - 2 rho s)) < delta, with s = sign(x_i x_j) in {+1, -1}.
bool correlation_sq_condition(double y_norm, double rho, int sign_product, double delta);
bool correlation_abs_condition(Eigen::Index n, double rho, int sign_product, double delta);

/// One column pair examined after a solve.
struct PairCheck {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  bool condition = false;
  bool clustered = false;
  double magnitude_gap = 0.0;
  bool violation() const noexcept { return condition && !clustered; }
};

/// Evaluates the clustering condition with the solution's own signs for
/// every column pair. The squared-loss condition additionally needs the two
/// columns to share a common norm (relative 1e-9); pairs without it report
/// condition = false. `clustered` means ||x_i| - |x_j|| <= cluster_tol.
std::vector<PairCheck> verify_clustering(const MatrixRef& a, const VectorRef& y,
                                         const VectorRef& x, const WeightVector& w, Loss loss,
                                         double cluster_tol = 1e-6);

/// ||C (x_hat - x_star)||_2, i.e. sqrt((x_hat - x*)^T C^T C (x_hat - x*)).
double c_metric(const VectorRef& x_hat, const VectorRef& x_star, const MatrixRef& c);

/// z_g = sum over j in G_g of signs[j] x_j.
Vector group_z(const VectorRef& x, const GroupStructure& gs);

/// Induced l1 matrix norm: the largest column l1 norm.
double matrix_l1_norm(const MatrixRef& c);

struct BoundInputs {
  double s = 0.0;
  double n = 1.0;
  double p = 2.0;
  double q = 2.0;
  double w1_over_wbar = 1.0;
  double c_l1_norm = 1.0;
  double epsilon = 0.0;
};

enum class BoundVariant {
  /// ||C||_1 and log q.
  GeneralQ,
  /// i.i.d. design: ||C||_1 = 1 and log p.
  IdentityP,
  /// replication design: ||C||_1 = 1 and log q.
  GroupedQ,
};

/// sqrt(2 pi) (4 sqrt(2) ||C||_1 (w1 / w-bar) sqrt(s log(dim) / n) + eps),
/// natural log; dim = p for IdentityP, q otherwise. Throws
/// std::invalid_argument when dim < 2, n < 1, s < 0, eps < 0 or
/// w1/w-bar < 1.
double bound_rhs(const BoundInputs& b, BoundVariant variant);

}  // namespace owl
