#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "blockspec/block_model.hpp"
#include "blockspec/error.hpp"
#include "blockspec/philox.hpp"
#include "fixtures.hpp"

using namespace blockspec;
using blockspec::testing::circular;
using blockspec::testing::two_block;

namespace {

ErrorCode code_of(const BlockStructure& s) {
  try {
    validate(s);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected validate to throw");
  return ErrorCode::kIoError;
}

}  // namespace

TEST_CASE("philox4x32-10 known answers") {
  // Reference vectors published with Random123.
  CHECK(Philox4x32(0)({0, 0, 0, 0}) ==
        Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32(~std::uint64_t{0})({~0u, ~0u, ~0u, ~0u}) ==
        Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32(0x299f31d0a4093822ull)({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}) ==
        Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("to_open_unit stays strictly inside (0, 1)") {
  CHECK(to_open_unit(0, 0) > 0.0);
  CHECK(to_open_unit(~0u, ~0u) < 1.0);
}

TEST_CASE("validate") {
  SUBCASE("single block") { CHECK_NOTHROW(validate(circular())); }
  SUBCASE("two-block example") { CHECK_NOTHROW(validate(two_block())); }
  SUBCASE("alpha summing to 1.1") {
    BlockStructure s = two_block();
    s.alpha = Eigen::Vector2d(0.5, 0.6);
    s.g.setOnes();
    CHECK(code_of(s) == ErrorCode::kInvalidAlpha);
  }
  SUBCASE("zero or negative alpha") {
    BlockStructure s = two_block();
    s.alpha = Eigen::Vector2d(0.0, 1.0);
    CHECK(code_of(s) == ErrorCode::kInvalidAlpha);
    s.alpha = Eigen::Vector2d(-0.5, 1.5);
    CHECK(code_of(s) == ErrorCode::kInvalidAlpha);
  }
  SUBCASE("non-positive g") {
    BlockStructure s = two_block();
    s.g(1, 0) = 0.0;
    CHECK(code_of(s) == ErrorCode::kInvalidG);
    s.g(1, 0) = -1.0;
    CHECK(code_of(s) == ErrorCode::kInvalidG);
  }
  SUBCASE("g shape must match alpha") {
    BlockStructure s = two_block();
    s.g = Eigen::MatrixXd::Ones(3, 3);
    CHECK(code_of(s) == ErrorCode::kInvalidG);
  }
  SUBCASE("D = 0") {
    BlockStructure s;
    CHECK(code_of(s) == ErrorCode::kInvalidD);
  }
  SUBCASE("sum tolerance is 1e-12") {
    BlockStructure s = two_block();
    s.alpha[1] += 5e-13;
    CHECK(is_valid(s));
    s.alpha[1] += 5e-12;
    CHECK_FALSE(is_valid(s));
  }
}

TEST_CASE("block_index follows the half-open interval rule") {
  const std::vector<double> alpha{0.3, 0.7};
  CHECK(block_index(3, 10, alpha) == 1);
  CHECK(block_index(4, 10, alpha) == 2);
  CHECK(block_index(1, 10, alpha) == 1);
  CHECK(block_index(10, 10, alpha) == 2);
  const std::vector<double> one{1.0};
  for (std::size_t i = 1; i <= 7; ++i) CHECK(block_index(i, 7, one) == 1);

  CHECK_THROWS_AS(block_index(0, 10, alpha), Error);
  CHECK_THROWS_AS(block_index(11, 10, alpha), Error);
  try {
    block_index(11, 10, alpha);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIndexOutOfRange);
  }
}

TEST_CASE("block_index is monotone and surjective (property)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const BlockStructure s = blockspec::testing::random_structure(rng, 6);
    const std::span<const double> alpha(s.alpha.data(), static_cast<std::size_t>(s.blocks()));
    const auto n = static_cast<std::size_t>(std::ceil(1.0 / s.alpha.minCoeff())) + trial % 17;
    std::vector<int> seen(static_cast<std::size_t>(s.blocks()), 0);
    int prev = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      const int c = block_index(i, n, alpha);
      REQUIRE(c >= prev);
      REQUIRE(c <= s.blocks());
      seen[static_cast<std::size_t>(c - 1)] = 1;
      prev = c;
    }
    CHECK(std::count(seen.begin(), seen.end(), 1) == s.blocks());
  }
}

TEST_CASE("block_sizes sum to N and are floor or floor + 1 (property)") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const BlockStructure s = blockspec::testing::random_structure(rng, 6);
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 3000);
    const auto sizes = block_sizes(n, std::span(s.alpha.data(), static_cast<std::size_t>(s.blocks())));
    std::size_t total = 0;
    for (int c = 0; c < s.blocks(); ++c) {
      const auto fl = static_cast<std::size_t>(std::floor(s.alpha[c] * static_cast<double>(n)));
      CHECK((sizes[c] == fl || sizes[c] == fl + 1));
      total += sizes[c];
    }
    CHECK(total == n);
  }
  // Leftovers go to blocks 1, 2, ... in order.
  const std::vector<double> thirds{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(block_sizes(11, thirds) == std::vector<std::size_t>{4, 4, 3});
}

TEST_CASE("sample_matrix is a deterministic function of (structure, N, seed, trial)") {
  const BlockStructure s = two_block();
  const SampledMatrix a = sample_matrix(s, 64, 42, 3);
  const SampledMatrix b = sample_matrix(s, 64, 42, 3);
  CHECK(a.entries == b.entries);
  CHECK(a.block_sizes == std::vector<std::size_t>{20, 44});
  CHECK(a.seed == 42);
  CHECK(a.trial_index == 3);
  CHECK(sample_matrix(s, 64, 42, 4).entries != a.entries);
  CHECK(sample_matrix(s, 64, 43, 3).entries != a.entries);
}

TEST_CASE("sample_matrix gives the same result from concurrent callers") {
  const BlockStructure s = two_block();
  const Eigen::MatrixXcd serial = sample_matrix(s, 80, 9, 1).entries;
  std::vector<Eigen::MatrixXcd> results(4);
  {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < results.size(); ++k) {
      pool.emplace_back([&, k] { results[k] = sample_matrix(s, 80, 9, 1).entries; });
    }
  }
  for (const auto& r : results) CHECK(r == serial);
}

TEST_CASE("entry variance is 1/N for every law") {
  for (const auto dist : {EntryDistribution::kComplexGaussian, EntryDistribution::kRealGaussian,
                          EntryDistribution::kRademacher}) {
    CAPTURE(to_string(dist));
    BlockStructure s = circular(1.7);
    s.distribution = dist;
    const std::size_t n = 500;
    const SampledMatrix m = sample_matrix(s, n, 2024, 0);
    const double mean = m.entries.cwiseAbs2().mean() * static_cast<double>(n) / (1.7 * 1.7);
    CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(m.entries.mean()) < 0.01 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("complex-gaussian real and imaginary parts each carry half the variance") {
  const std::size_t n = 400;
  const SampledMatrix m = sample_matrix(circular(), n, 77, 0);
  const double re = m.entries.real().array().square().mean() * static_cast<double>(n);
  const double im = m.entries.imag().array().square().mean() * static_cast<double>(n);
  CHECK(re == doctest::Approx(0.5).epsilon(0.02));
  CHECK(im == doctest::Approx(0.5).epsilon(0.02));
  const double cross = (m.entries.real().array() * m.entries.imag().array()).mean() * n;
  CHECK(std::abs(cross) < 0.01);
}

TEST_CASE("per-block second moments match g^2 / N at N = 1000") {
  const std::size_t n = 1000;
  const BlockStructure s = two_block();
  const SampledMatrix m = sample_matrix(s, n, 1, 0);
  REQUIRE(m.block_sizes == std::vector<std::size_t>{300, 700});
  const Eigen::Index n1 = 300;
  const Eigen::Index n2 = 700;
  const auto block_var = [&](Eigen::Index r0, Eigen::Index nr, Eigen::Index c0, Eigen::Index nc) {
    return m.entries.block(r0, c0, nr, nc).cwiseAbs2().mean();
  };
  CHECK(block_var(0, n1, n1, n2) == doctest::Approx(4.0 / n).epsilon(0.05));
  CHECK(block_var(0, n1, 0, n1) == doctest::Approx(1.0 / n).epsilon(0.05));
  CHECK(block_var(n1, n2, 0, n1) == doctest::Approx(9.0 / n).epsilon(0.05));
  CHECK(block_var(n1, n2, n1, n2) == doctest::Approx(16.0 / n).epsilon(0.05));
}

TEST_CASE("rademacher entries are exactly +-g/sqrt(N) with fourth moment 1/N^2") {
  BlockStructure s = circular();
  s.distribution = EntryDistribution::kRademacher;
  const std::size_t n = 300;
  const SampledMatrix m = sample_matrix(s, n, 5, 0);
  const double mag = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
      REQUIRE(m.entries(i, j).imag() == 0.0);
      REQUIRE(std::abs(m.entries(i, j).real()) == doctest::Approx(mag).epsilon(1e-15));
    }
  }
  const double fourth = m.entries.cwiseAbs2().array().square().mean();
  CHECK(fourth == doctest::Approx(1.0 / (n * n)).epsilon(1e-12));
}

TEST_CASE("sample_matrix rejects invalid input") {
  BlockStructure bad = two_block();
  bad.g(0, 0) = 0.0;
  try {
    sample_matrix(bad, 10, 0, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidStructure);
  }
  try {
    sample_matrix(blockspec::testing::three_block(), 2, 0, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidStructure);
  }
}

TEST_CASE("distribution names round-trip") {
  for (const auto dist : {EntryDistribution::kComplexGaussian, EntryDistribution::kRealGaussian,
                          EntryDistribution::kRademacher}) {
    CHECK(parse_distribution(to_string(dist)) == dist);
  }
  CHECK_FALSE(parse_distribution("cauchy").has_value());
}
