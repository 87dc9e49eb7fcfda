#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace blockspec {

enum class EntryDistribution { kRealGaussian, kComplexGaussian, kRademacher };

std::string_view to_string(EntryDistribution dist);
std::optional<EntryDistribution> parse_distribution(std::string_view name);

// Model parameters: D blocks per axis, block fractions alpha (summing to one),
// per-block standard-deviation multipliers g, and the entry law.
struct BlockStructure {
  Eigen::VectorXd alpha;
  Eigen::MatrixXd g;
  EntryDistribution distribution = EntryDistribution::kComplexGaussian;

  int blocks() const { return static_cast<int>(alpha.size()); }
};

// Tolerance on |sum(alpha) - 1|.
inline constexpr double kAlphaSumTolerance = 1e-12;

// Throws Error with kInvalidD, kInvalidAlpha or kInvalidG.
void validate(const BlockStructure& structure);

// Returns true iff validate() would succeed.
bool is_valid(const BlockStructure& structure);

/// 1-based block label c of 1-based row i, i.e. the unique c with
/// i/N in (alpha_1 + ... + alpha_{c-1}, alpha_1 + ... + alpha_c].
int block_index(std::size_t i, std::size_t n, std::span<const double> alpha);

/// Sizes floor(alpha_c N), with the leftover rows handed out one each to
/// blocks 1, 2, ... in order.
std::vector<std::size_t> block_sizes(std::size_t n, std::span<const double> alpha);

struct SampledMatrix {
  std::size_t n = 0;
  Eigen::MatrixXcd entries;
  std::vector<std::size_t> block_sizes;
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;
};

/// Draws entry (i, j) = g(c_i, c_j) * J with E J = 0, E|J|^2 = 1/N. The draw
/// for each entry is keyed by (seed, trial_index, i, j) only.
SampledMatrix sample_matrix(const BlockStructure& structure, std::size_t n, std::uint64_t seed,
                            std::uint64_t trial_index);

}  // namespace blockspec
