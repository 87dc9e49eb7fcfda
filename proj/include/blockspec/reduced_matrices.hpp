#pragma once

#include <Eigen/Dense>

#include "blockspec/block_model.hpp"

namespace blockspec {

struct PerronPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // positive, entries sum to 1
  int iterations = 0;
};

// G(c, d) = alpha_c g(c, d)^2 and Ghat(c, d) = alpha_c g(d, c)^2, together with
// the Perron-Frobenius eigenpair of G.
struct ReducedPair {
  Eigen::VectorXd alpha;
  Eigen::MatrixXd G;
  Eigen::MatrixXd Ghat;
  double pf_value = 0.0;
  Eigen::VectorXd pf_vector;

  int blocks() const { return static_cast<int>(G.rows()); }
};

struct PowerIterationOptions {
  double tol = 1e-12;
  int max_iter = 100000;
};

/// Dominant eigenpair of a strictly positive square matrix by power iteration
/// from the all-ones vector. Throws kNonPositiveMatrix or kNoConvergence.
PerronPair perron_eigenpair(const Eigen::MatrixXd& m, const PowerIterationOptions& opts = {});

/// Largest eigenvalue of a 2x2 matrix with real spectrum, (tr + sqrt(tr^2 - 4 det)) / 2.
double closed_form_dominant_2x2(const Eigen::Matrix2d& m);

ReducedPair build_reduced(const BlockStructure& structure);

/// Radius sqrt(rho(G)) of the support of the limiting spectral measure.
double spectral_radius(const BlockStructure& structure);

}  // namespace blockspec
