#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "blockspec/block_model.hpp"
#include "blockspec/reduced_matrices.hpp"

namespace blockspec::testing {

inline BlockStructure circular(double sigma = 1.0) {
  BlockStructure s;
  s.alpha = Eigen::VectorXd::Constant(1, 1.0);
  s.g = Eigen::MatrixXd::Constant(1, 1, sigma);
  return s;
}

inline BlockStructure two_block() {
  BlockStructure s;
  s.alpha = Eigen::Vector2d(0.3, 0.7);
  s.g.resize(2, 2);
  s.g << 1, 2, 3, 4;
  return s;
}

inline BlockStructure three_block() {
  BlockStructure s;
  s.alpha = Eigen::Vector3d(0.25, 0.30, 0.45);
  s.g.resize(3, 3);
  s.g << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  return s;
}

// Random valid structure: alpha bounded away from 0, g in [g_lo, g_hi].
inline BlockStructure random_structure(std::mt19937_64& rng, int max_d, double g_lo = 0.3,
                                       double g_hi = 3.0) {
  std::uniform_int_distribution<int> dim(1, max_d);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  std::uniform_real_distribution<double> gain(g_lo, g_hi);
  const int d = dim(rng);
  BlockStructure s;
  s.alpha.resize(d);
  for (int c = 0; c < d; ++c) s.alpha[c] = weight(rng);
  s.alpha /= s.alpha.sum();
  // Renormalizing can leave the sum a few ulps off 1; push the rounding into
  // the last entry.
  s.alpha[d - 1] = 1.0 - (s.alpha.sum() - s.alpha[d - 1]);
  s.g.resize(d, d);
  for (int c = 0; c < d; ++c) {
    for (int e = 0; e < d; ++e) s.g(c, e) = gain(rng);
  }
  return s;
}

// Same model with blocks relabeled by perm (new block k is old block perm[k]).
inline BlockStructure permuted(const BlockStructure& s, const std::vector<int>& perm) {
  BlockStructure out = s;
  const int d = s.blocks();
  for (int k = 0; k < d; ++k) {
    out.alpha[k] = s.alpha[perm[k]];
    for (int l = 0; l < d; ++l) out.g(k, l) = s.g(perm[k], perm[l]);
  }
  return out;
}

}  // namespace blockspec::testing
