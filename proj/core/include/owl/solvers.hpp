#pragma once

#include "owl/types.hpp"
#include "owl/weights.hpp"

#include <cstdint>
#include <optional>
#include <variant>

namespace owl {

enum class Loss { SquaredL2, AbsoluteL1 };

/// min loss(Ax - y) + Omega_w(x).
struct Lagrangian {};

/// min Omega_w(x) subject to (1/n)||Ax - y||_2^2 <= eps^2 (SquaredL2)
/// or (1/n)||Ax - y||_1 <= eps (AbsoluteL1).
struct Constrained {
  double epsilon = 0.0;
};

using Formulation = std::variant<Lagrangian, Constrained>;

/// Design A (n x p), observations y (n), weights (p), loss and formulation.
/// Shapes and epsilon are validated at construction.
class ProblemInstance {
 public:
  ProblemInstance(Matrix design, Vector observations, WeightVector weights, Loss loss,
                  Formulation formulation = Lagrangian{});

  const Matrix& design() const noexcept { return a_; }
  const Vector& observations() const noexcept { return y_; }
  const WeightVector& weights() const noexcept { return w_; }
  Loss loss() const noexcept { return loss_; }
  const Formulation& formulation() const noexcept { return formulation_; }

  bool is_constrained() const noexcept {
    return std::holds_alternative<Constrained>(formulation_);
  }
  /// Epsilon of a constrained problem; 0 for Lagrangian ones.
  double epsilon() const noexcept;

  Eigen::Index n() const noexcept { return a_.rows(); }
  Eigen::Index p() const noexcept { return a_.cols(); }

  /// Same design, observations and loss with a different weight vector.
  ProblemInstance with_weights(WeightVector w) const;
  ProblemInstance with_formulation(Formulation f) const;

 private:
  Matrix a_;
  Vector y_;
  WeightVector w_;
  Loss loss_;
  Formulation formulation_;
};

enum class StepRule {
  /// 1/L with L an upper estimate of ||A||^2 (exact eigenvalue of the
  /// smaller Gram matrix up to size 512, padded power iteration beyond).
  FixedFromSpectralNorm,
  /// Start from a small L and double it whenever the upper bound fails.
  Backtracking,
};

/// Primal (tau) and dual (sigma) step sizes of the primal-dual scheme.
/// Convergence needs tau * sigma * ||A||^2 < 1.
struct PrimalDualSteps {
  double primal = 0.0;
  double dual = 0.0;
};

struct SolverConfig {
  int max_iters = 100000;
  /// Fixed-point residual (squared loss) or relative primal-dual gap
  /// (absolute loss) at which an iteration is declared converged.
  double tol = 1e-8;
  StepRule step_rule = StepRule::FixedFromSpectralNorm;
  std::optional<PrimalDualSteps> dual_params;
  /// Seeds the power-iteration start vector. Solvers start from x = 0.
  std::uint64_t seed = 0;

  /// Constrained forms: maximum bisection steps over the Lagrangian scale and
  /// the relative band [c (1 - rel_gap), c] in which an active constraint
  /// stops the search early.
  int bisection_max_steps = 60;
  double bisection_rel_gap = 1e-3;

  /// Throws std::invalid_argument on tol <= 0 or max_iters < 1.
  void validate() const;
};

struct Solution {
  CoefficientVector x_hat;
  /// Lagrangian objective, or Omega_w(x_hat) for constrained forms.
  double objective = 0.0;
  double residual_l2_sq_over_n = 0.0;
  double residual_l1_over_n = 0.0;
  /// Squared loss: ||x - prox_{t w}(x - t grad)||_2. Absolute loss:
  /// primal-dual gap / max(1, primal objective).
  double fixed_point_residual = 0.0;
  /// Prox-gradient step behind the certificate (squared loss only).
  double step = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct ObjectiveValue {
  double value = 0.0;
  /// Always true for Lagrangian forms; constraint satisfaction otherwise.
  bool feasible = true;
};

/// Lagrangian objective value, or Omega_w(x) with a feasibility flag for
/// constrained forms.
ObjectiveValue objective(const ProblemInstance& prob, const VectorRef& x);

/// Accelerated proximal gradient (FISTA with adaptive restart) for
/// min 0.5 ||Ax - y||^2 + Omega_w(x).
Solution solve_sq_lagrangian(const ProblemInstance& prob, const SolverConfig& cfg = {});

/// Chambolle-Pock primal-dual iteration for min ||Ax - y||_1 + Omega_w(x).
/// The primal step is prox_owl; the dual step clips to the l-infinity ball.
Solution solve_abs_lagrangian(const ProblemInstance& prob, const SolverConfig& cfg = {});

/// Constrained forms, by bisection over a Lagrangian scale tau: the residual
/// of argmin loss + tau Omega_w is non-decreasing in tau, and the feasible
/// iterate with the smallest Omega_w is returned.
///
/// Throws InfeasibleError when even a vanishing regularizer cannot meet the
/// residual bound.
Solution solve_constrained(const ProblemInstance& prob, const SolverConfig& cfg = {});

/// Dispatches on loss and formulation.
Solution solve(const ProblemInstance& prob, const SolverConfig& cfg = {});

/// Squared-loss optimality certificate ||x - prox_{t w}(x - t A^T(Ax - y))||_2,
/// evaluated directly from A.
double sq_fixed_point_residual(const ProblemInstance& prob, const VectorRef& x, double step);

/// Largest eigenvalue of A^T A by power iteration from a seeded random start.
double spectral_norm_sq(const MatrixRef& a, int max_iters = 30, double rel_tol = 1e-6,
                        std::uint64_t seed = 0);

namespace detail {
/// max_k (sum_{i<=k} |g|_[i]) / (sum_{i<=k} w_i); used to build a feasible
/// dual point for the primal-dual gap.
double owl_dual_norm(const VectorRef& g, const WeightVector& w);
}  // namespace detail

}  // namespace owl
