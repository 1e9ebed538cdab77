#pragma once

#include "owl/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace owl {

/// Partition G_1..G_q of the column indices {0..p-1}, with an optional sign
/// per column. Column j of the induced replication matrix is signs[j] e_g
/// where g is the group holding j.
class GroupStructure {
 public:
  /// Throws std::invalid_argument unless the groups are non-empty, disjoint
  /// and cover 0..p-1 exactly. `signs` is empty (all +1) or has length p
  /// with entries +1/-1.
  explicit GroupStructure(std::vector<std::vector<Eigen::Index>> groups,
                          std::vector<int> signs = {});

  /// q contiguous groups of near-equal size covering p columns (group sizes
  /// differ by at most one, larger groups first).
  static GroupStructure contiguous(Eigen::Index p, Eigen::Index q);
  /// p singleton groups.
  static GroupStructure singletons(Eigen::Index p);

  /// Parses "1,2;3;4" (one-based, ';' between groups). A leading '-' on a
  /// column index flips that column's sign, e.g. "1,-2;3".
  static GroupStructure parse(const std::string& text);

  const std::vector<std::vector<Eigen::Index>>& groups() const noexcept { return groups_; }
  const std::vector<int>& signs() const noexcept { return signs_; }
  Eigen::Index p() const noexcept { return static_cast<Eigen::Index>(signs_.size()); }
  Eigen::Index q() const noexcept { return static_cast<Eigen::Index>(groups_.size()); }
  /// Group index holding column j.
  Eigen::Index group_of(Eigen::Index j) const { return owner_.at(static_cast<std::size_t>(j)); }

  /// Same text form accepted by parse().
  std::string to_string() const;

 private:
  std::vector<std::vector<Eigen::Index>> groups_;
  std::vector<int> signs_;
  std::vector<Eigen::Index> owner_;
};

struct SignalOptions {
  /// Perturb within-group magnitudes by up to +-10% before the l1 rescale,
  /// breaking the equal-magnitude structure for stress tests.
  bool perturbed = false;
};

/// C with C[g][j] = signs[j] when j is in G_g, else 0: every column 1-sparse
/// with unit magnitude.
Matrix replication_matrix(const GroupStructure& gs);

/// A = B C with B n x q i.i.d. N(0, 1), drawn from the design stream of
/// `seed`. Entry B(i, k) is the (i q + k)-th normal of that stream.
Matrix sample_design(Eigen::Index n, const MatrixRef& c, std::uint64_t seed);

/// s-group-sparse signal: s distinct groups chosen uniformly, equal l1 mass
/// 1/sqrt(s) per group spread equally over its columns (signed by the column
/// signs), so ||x*||_1 = sqrt(s). Throws std::invalid_argument if s > q.
CoefficientVector sample_signal(const GroupStructure& gs, Eigen::Index s, std::uint64_t seed,
                                SignalOptions opts = {});

/// Gaussian noise rescaled so that (1/n)||nu||_1 = epsilon exactly.
Vector sample_noise(Eigen::Index n, double epsilon, std::uint64_t seed);

/// Everything one draw of the model produces.
struct Dataset {
  Matrix a;
  Vector y;
  CoefficientVector x_star;
  Vector noise;
};

/// Generative model A = B C, y = A x* + nu, with B n x q standard Gaussian
/// and C the replication matrix of `groups`.
struct GenerativeModel {
  GroupStructure groups;
  Eigen::Index n = 1;
  Eigen::Index s = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  SignalOptions signal{};
};

/// Draws (A, x*, nu) from independent streams of the model seed and forms
/// y = A x* + nu. When q < n a warning is written to `warning` (if given);
/// the draw still proceeds.
Dataset generate(const GenerativeModel& model, std::string* warning = nullptr);

}  // namespace owl
