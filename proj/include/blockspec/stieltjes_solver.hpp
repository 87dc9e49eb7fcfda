#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "blockspec/error.hpp"
#include "blockspec/reduced_matrices.hpp"

namespace blockspec {

struct SolverParams {
  double tol = 1e-12;         // sup-norm change of (h, hhat) that counts as converged
  long max_iter = 1000000;    // per regularization level
  double damping = 0.5;       // weight of the raw update, in (0, 1]
  double t0 = 1.0;            // first regularization level
  double t_min = 1e-6;        // last level, reported as the t -> 0 limit
  double vanish_threshold = 1e-4;

  // Throws kInvalidArgument naming the offending field.
  void validate() const;
};

// Fixed point of the real system
//   h_c    = ([G^T h]_c + t)        * psi_c
//   hhat_c = ([Ghat^T hhat]_c + t)  * psi_c
//   psi_c  = 1 / (u + ([Ghat^T hhat]_c + t) ([G^T h]_c + t))
// at u = |z|^2 and regularization t. At the fixed point
// sum_c alpha_c h_c = sum_c alpha_c hhat_c.
struct FixedPointSolution {
  double u = 0.0;
  double t = 0.0;
  Eigen::VectorXd h;
  Eigen::VectorXd hhat;
  Eigen::VectorXd psi;
  long iterations = 0;
  bool converged = false;
  bool interior = false;  // weighted_h >= vanish_threshold
  double weighted_h = 0.0;  // sum_c alpha_c h_c
};

// Raised when the iteration cap is hit. Carries the last iterate (with
// converged == false) and, under continuation, the level at which it failed.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, FixedPointSolution last)
      : Error(ErrorCode::kNoConvergence, what), last_(std::move(last)) {}

  const FixedPointSolution& last_iterate() const noexcept { return last_; }
  double t() const noexcept { return last_.t; }
  long iterations() const noexcept { return last_.iterations; }

 private:
  FixedPointSolution last_;
};

using HPair = std::pair<Eigen::VectorXd, Eigen::VectorXd>;

/// One damped step (1 - damping) * (h, hhat) + damping * T(h, hhat).
HPair iterate_once(const Eigen::VectorXd& h, const Eigen::VectorXd& hhat, double u, double t,
                   const ReducedPair& reduced, double damping);

/// psi_c = 1 / (u + ([Ghat^T hhat]_c + t)([G^T h]_c + t)).
Eigen::VectorXd psi_of(const Eigen::VectorXd& h, const Eigen::VectorXd& hhat, double u, double t,
                       const ReducedPair& reduced);

/// Rescales h by s and hhat by 1/s so that alpha.h == alpha.hhat. At t = 0
/// this scaling maps solutions to solutions, so for small t the plain
/// iteration drifts along it very slowly; the fixed point itself is unchanged.
void rebalance(Eigen::VectorXd& h, Eigen::VectorXd& hhat, const Eigen::VectorXd& alpha);

/// Iterates iterate_once followed by rebalance until the sup-norm change of
/// (h, hhat) drops below tol, cold-starting from zeros unless a warm start is
/// given. Throws NoConvergenceError on hitting max_iter.
FixedPointSolution solve(double u, double t, const ReducedPair& reduced,
                         const SolverParams& params = {},
                         const std::optional<HPair>& warm_start = std::nullopt);

/// Solves at t0, t0/2, t0/4, ... and finally t_min, each level warm-started
/// from the previous one. The first level starts from warm_start if given.
FixedPointSolution t_continuation(double u, const ReducedPair& reduced,
                                  const SolverParams& params = {},
                                  const std::optional<HPair>& warm_start = std::nullopt);

/// b_c = -z psi_c inside the support and -1 / conj(z) outside.
std::vector<std::complex<double>> b_values(const FixedPointSolution& solution,
                                           std::complex<double> z);

}  // namespace blockspec
