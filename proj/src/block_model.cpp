#include "blockspec/block_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "blockspec/error.hpp"
#include "blockspec/philox.hpp"

namespace blockspec {

std::string_view to_string(EntryDistribution dist) {
  switch (dist) {
    case EntryDistribution::kRealGaussian: return "real-gaussian";
    case EntryDistribution::kComplexGaussian: return "complex-gaussian";
    case EntryDistribution::kRademacher: return "rademacher";
  }
  return "unknown";
}

std::optional<EntryDistribution> parse_distribution(std::string_view name) {
  if (name == "real-gaussian") return EntryDistribution::kRealGaussian;
  if (name == "complex-gaussian") return EntryDistribution::kComplexGaussian;
  if (name == "rademacher") return EntryDistribution::kRademacher;
  return std::nullopt;
}

void validate(const BlockStructure& s) {
  const Eigen::Index d = s.alpha.size();
  if (d == 0) throw Error(ErrorCode::kInvalidD, "D must be at least 1");
  if (s.g.rows() != d || s.g.cols() != d) {
    std::ostringstream msg;
    msg << "g must be " << d << "x" << d << ", got " << s.g.rows() << "x" << s.g.cols();
    throw Error(ErrorCode::kInvalidG, msg.str());
  }
  double sum = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    const double a = s.alpha[c];
    if (!(a > 0.0) || !std::isfinite(a)) {
      std::ostringstream msg;
      msg << "alpha[" << c << "] = " << a << " is not a positive finite number";
      throw Error(ErrorCode::kInvalidAlpha, msg.str());
    }
    sum += a;
  }
  if (std::abs(sum - 1.0) > kAlphaSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "alpha sums to " << sum << ", expected 1";
    throw Error(ErrorCode::kInvalidAlpha, msg.str());
  }
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index e = 0; e < d; ++e) {
      const double v = s.g(c, e);
      if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "g[" << c << "][" << e << "] = " << v << " is not a positive finite number";
        throw Error(ErrorCode::kInvalidG, msg.str());
      }
    }
  }
}

bool is_valid(const BlockStructure& structure) {
  try {
    validate(structure);
    return true;
  } catch (const Error&) {
    return false;
  }
}

int block_index(std::size_t i, std::size_t n, std::span<const double> alpha) {
  if (alpha.empty()) throw Error(ErrorCode::kInvalidD, "empty alpha");
  if (i < 1 || i > n) {
    std::ostringstream msg;
    msg << "row " << i << " outside 1.." << n;
    throw Error(ErrorCode::kIndexOutOfRange, msg.str());
  }
  // Slack absorbs rounding in the running sum so exact boundaries such as
  // 3/10 vs 0.3 stay in the lower block.
  constexpr double kSlack = 1e-12;
  const double x = static_cast<double>(i) / static_cast<double>(n);
  double upper = 0.0;
  for (std::size_t c = 0; c + 1 < alpha.size(); ++c) {
    upper += alpha[c];
    if (x <= upper + kSlack) return static_cast<int>(c) + 1;
  }
  return static_cast<int>(alpha.size());
}

std::vector<std::size_t> block_sizes(std::size_t n, std::span<const double> alpha) {
  std::vector<std::size_t> sizes(alpha.size());
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < alpha.size(); ++c) {
    sizes[c] = static_cast<std::size_t>(std::floor(alpha[c] * static_cast<double>(n)));
    assigned += sizes[c];
  }
  // sum(alpha) = 1 means at most D - 1 rows are left over (or a few ulps
  // past n, which is trimmed from the back).
  for (std::size_t c = 0; assigned < n; c = (c + 1) % sizes.size()) {
    ++sizes[c];
    ++assigned;
  }
  for (std::size_t c = sizes.size(); assigned > n && c-- > 0;) {
    if (sizes[c] > 0) {
      --sizes[c];
      --assigned;
    }
  }
  return sizes;
}

namespace {

double normal_from(double u1, double u2, bool use_sine) {
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return radius * (use_sine ? std::sin(angle) : std::cos(angle));
}

// Unit-variance draw J0 for entry (i, j); scaled by g / sqrt(N) by the caller.
std::complex<double> unit_entry(const Philox4x32& rng, EntryDistribution dist, std::uint32_t i,
                                std::uint32_t j, std::uint64_t trial) {
  const auto bits = rng({i, j, static_cast<std::uint32_t>(trial),
                         static_cast<std::uint32_t>(trial >> 32)});
  switch (dist) {
    case EntryDistribution::kRealGaussian: {
      const double u1 = to_open_unit(bits[0], bits[1]);
      const double u2 = to_open_unit(bits[2], bits[3]);
      return {normal_from(u1, u2, false), 0.0};
    }
    case EntryDistribution::kComplexGaussian: {
      const double u1 = to_open_unit(bits[0], bits[1]);
      const double u2 = to_open_unit(bits[2], bits[3]);
      return {normal_from(u1, u2, false) * std::numbers::sqrt2 / 2.0,
              normal_from(u1, u2, true) * std::numbers::sqrt2 / 2.0};
    }
    case EntryDistribution::kRademacher:
      return {(bits[0] & 1u) ? 1.0 : -1.0, 0.0};
  }
  return {};
}

}  // namespace

SampledMatrix sample_matrix(const BlockStructure& structure, std::size_t n, std::uint64_t seed,
                            std::uint64_t trial_index) {
  try {
    validate(structure);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidStructure, e.what());
  }
  const auto d = static_cast<std::size_t>(structure.blocks());
  if (n < d) {
    std::ostringstream msg;
    msg << "N = " << n << " is smaller than D = " << d;
    throw Error(ErrorCode::kInvalidStructure, msg.str());
  }
  if (n > 0xFFFFFFFFull) throw Error(ErrorCode::kInvalidStructure, "N exceeds 2^32 - 1");

  SampledMatrix out;
  out.n = n;
  out.seed = seed;
  out.trial_index = trial_index;
  out.block_sizes = block_sizes(n, std::span(structure.alpha.data(), d));

  std::vector<int> label(n);
  for (std::size_t c = 0, row = 0; c < d; ++c) {
    for (std::size_t k = 0; k < out.block_sizes[c]; ++k) label[row++] = static_cast<int>(c);
  }

  const Philox4x32 rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const auto nn = static_cast<Eigen::Index>(n);
  out.entries.resize(nn, nn);
  for (Eigen::Index j = 0; j < nn; ++j) {
    for (Eigen::Index i = 0; i < nn; ++i) {
      const double sd = structure.g(label[i], label[j]) * scale;
      out.entries(i, j) = sd * unit_entry(rng, structure.distribution, static_cast<std::uint32_t>(i),
                                          static_cast<std::uint32_t>(j), trial_index);
    }
  }
  return out;
}

}  // namespace blockspec
