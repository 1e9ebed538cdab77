#pragma once

#include "owlreg/weight_spec.hpp"

#include "owl/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace owlreg {

/// Grid and settings of a Monte-Carlo run; see README for the file grammar.
struct ExperimentConfig {
  std::vector<Eigen::Index> n;
  /// When set, n = ceil(n_rule * s * ln p) per cell and `n` must be empty.
  std::optional<double> n_rule;
  std::vector<Eigen::Index> s;
  std::vector<Eigen::Index> q;
  /// Empty: p = replication * q.
  std::vector<Eigen::Index> p;
  Eigen::Index replication = 2;
  std::vector<double> eps;
  WeightSpec weights{OscarSpec{1.0, 0.01}};
  int trials = 50;
  std::uint64_t seed = 0;
  owl::Loss loss = owl::Loss::AbsoluteL1;
  bool constrained = true;
  std::filesystem::path output = "report.csv";
  std::optional<std::filesystem::path> trials_output;

  /// Throws ParseError on unknown or repeated keys, malformed values, a
  /// missing grid axis or trials < 1.
  static ExperimentConfig parse(std::string_view text);
};

struct CellSpec {
  Eigen::Index n = 0;
  Eigen::Index s = 0;
  Eigen::Index q = 0;
  Eigen::Index p = 0;
  double eps = 0.0;
};

/// Cells in the order n (or n_rule), s, q, p, eps, last axis fastest.
std::vector<CellSpec> expand_grid(const ExperimentConfig& cfg);

struct TrialResult {
  std::uint64_t seed = 0;
  double error = 0.0;
  bool converged = false;
  bool infeasible = false;
  int iterations = 0;
  /// Same-group column pairs whose sign-adjusted coefficients differ by more
  /// than the cluster tolerance (only counted when the weights have Delta > 0).
  int violations = 0;
};

struct CellResult {
  CellSpec cell;
  std::vector<TrialResult> trials;
  /// Over converged trials only.
  double mean_error = 0.0;
  /// Sample standard deviation of the converged trials' errors.
  double std_error = 0.0;
  double bound = 0.0;
  /// mean / bound; 0 when both vanish.
  double ratio = 0.0;
  int violations = 0;
  int nonconverged = 0;

  bool passed() const noexcept;
};

struct ExperimentReport {
  std::vector<CellResult> cells;

  bool passed() const noexcept;
  std::string to_csv() const;
  std::string trials_csv() const;
};

struct RunOptions {
  owl::SolverConfig solver;
  int threads = 1;
  double cluster_tol = 1e-6;
  /// One progress line per finished cell, if set.
  std::ostream* log = nullptr;
};

/// One seeded draw of a cell: generate, solve, measure.
TrialResult run_trial(const ExperimentConfig& cfg, const CellSpec& cell, std::uint64_t seed,
                      const RunOptions& opts);

/// Trial t of cell c uses derive_seed(cfg.seed, {c, t}), so the report does
/// not depend on the thread count.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace owlreg
