#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "blockspec/density.hpp"
#include "fixtures.hpp"
#include "newton_oracle.hpp"

using namespace blockspec;
using blockspec::testing::circular;
using blockspec::testing::two_block;
using blockspec::testing::three_block;

namespace {

constexpr double kInvPi = 1.0 / std::numbers::pi;

// Interior nodes: everything except the two outermost, whose boundary
// behavior is not pinned down.
bool interior_node(std::size_t k, std::size_t n) { return k + 2 < n; }

double trapezoid_mass(const RadialDensity& d) {
  double total = 0.0;
  for (std::size_t k = 1; k < d.size(); ++k) {
    total += 0.5 * (d.p[k] + d.p[k - 1]) * (d.r_grid[k] - d.r_grid[k - 1]);
  }
  return total;
}

}  // namespace

TEST_CASE("density_grid: circular law") {
  const RadialDensity d = density_grid(circular(), 513);
  REQUIRE(d.size() == 513);
  CHECK(d.radius == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.u_grid.front() == 0.0);
  CHECK(d.u_grid.back() == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!interior_node(k, d.size())) continue;
    CAPTURE(k);
    CHECK(std::abs(d.f[k] - kInvPi) < 1e-3);
  }
  CHECK(std::abs(d.M.back() - 1.0) < 1e-3);
  CHECK(d.M.front() == 0.0);
}

TEST_CASE("density_grid: sigma = 2 rescales to 1/(4 pi) on radius 2") {
  const RadialDensity d = density_grid(circular(2.0), 513);
  CHECK(d.radius == doctest::Approx(2.0).epsilon(1e-14));
  // Exact covariance needs t scaled as well: g -> 2g, u -> 4u pairs with t -> 2t.
  SolverParams half;
  half.t0 = 0.5;
  half.t_min = 5e-7;
  const RadialDensity unit = density_grid(circular(), 513, half);
  for (std::size_t k = 0; k < d.size(); ++k) {
    CHECK(d.r_grid[k] == doctest::Approx(2.0 * unit.r_grid[k]).epsilon(1e-13));
    if (!interior_node(k, d.size())) continue;
    CHECK(std::abs(d.f[k] - kInvPi / 4.0) < 1e-3);
    CHECK(std::abs(d.f[k] - unit.f[k] / 4.0) < 1e-6);
  }
}

TEST_CASE("density_grid: invariants on the block examples") {
  for (const BlockStructure& s : {two_block(), three_block()}) {
    const RadialDensity d = density_grid(s, 513);
    CHECK(d.radius == doctest::Approx(spectral_radius(s)).epsilon(1e-14));
    REQUIRE(d.psi_grid.rows() == s.blocks());
    REQUIRE(static_cast<std::size_t>(d.psi_grid.cols()) == d.size());
    CHECK((d.psi_grid.array() > 0.0).all());
    for (std::size_t k = 0; k < d.size(); ++k) {
      CHECK(d.f[k] >= 0.0);
      CHECK(d.p[k] == 2.0 * std::numbers::pi * d.r_grid[k] * d.f[k]);
      if (k > 0) {
        CHECK(d.r_grid[k] > d.r_grid[k - 1]);
        CHECK(d.M[k] >= d.M[k - 1]);
      }
    }
    CHECK(d.M.front() == 0.0);
    CHECK(std::abs(d.M.back() - 1.0) < 1e-3);
    CHECK(std::abs(trapezoid_mass(d) - d.M.back()) < 1e-3);
  }
  CHECK(density_grid(two_block(), 513).radius == doctest::Approx(3.4430).epsilon(1e-4));
}

TEST_CASE("density_grid: two-block density against Newton's method") {
  const BlockStructure s = two_block();
  const ReducedPair r = build_reduced(s);
  const RadialDensity d = density_grid(s, 513);
  const auto mass_at = [&](double u) {
    const auto n = blockspec::testing::newton_fixed_point(u, 1e-6, r);
    return u * r.alpha.dot(n.psi);
  };
  for (const std::size_t k : {64u, 128u, 256u, 400u, 480u}) {
    CAPTURE(k);
    const double u = d.u_grid[k];
    const double du = 1e-4 * r.pf_value;
    const double oracle = (mass_at(u + du) - mass_at(u - du)) / (2.0 * du) * kInvPi;
    CHECK(std::abs(d.f[k] - oracle) < 1e-4);
    CHECK(std::abs(d.M[k] - mass_at(u)) < 1e-8);
  }
}

TEST_CASE("density_grid: refinement moves interior values by less than 1e-4") {
  for (const BlockStructure& s : {two_block(), three_block()}) {
    const RadialDensity coarse = density_grid(s, 513);
    const RadialDensity fine = density_grid(s, 1025);
    for (std::size_t k = 0; k + 5 < coarse.size(); ++k) {
      CHECK(fine.u_grid[2 * k] == doctest::Approx(coarse.u_grid[k]).epsilon(1e-14));
      CHECK(std::abs(fine.f[2 * k] - coarse.f[k]) < 1e-4);
    }
  }
}

TEST_CASE("density_grid: relabeling blocks changes nothing (property)") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 6; ++trial) {
    const BlockStructure s = blockspec::testing::random_structure(rng, 4);
    std::vector<int> perm(static_cast<std::size_t>(s.blocks()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const RadialDensity a = density_grid(s, 129);
    const RadialDensity b = density_grid(blockspec::testing::permuted(s, perm), 129);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(std::abs(a.f[k] - b.f[k]) < 1e-10);
      CHECK(std::abs(a.M[k] - b.M[k]) < 1e-10);
    }
  }
}

TEST_CASE("density_grid is bitwise independent of the worker count") {
  const RadialDensity one = density_grid(three_block(), 257, {}, 1);
  for (const unsigned workers : {2u, 8u}) {
    const RadialDensity many = density_grid(three_block(), 257, {}, workers);
    CHECK(many.f == one.f);
    CHECK(many.M == one.M);
    CHECK(many.psi_grid == one.psi_grid);
  }
}

TEST_CASE("density_grid: errors") {
  CHECK_THROWS_AS(density_grid(circular(), 8), Error);
  SolverParams p;
  p.max_iter = 2;
  try {
    density_grid(two_block(), 65, p);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSolverFailure);
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("cumulative_mass") {
  const ReducedPair one = build_reduced(circular());
  CHECK(cumulative_mass(t_continuation(0.0, one), circular()) == 0.0);
  CHECK(cumulative_mass(t_continuation(0.25, one), circular()) == doctest::Approx(0.25).epsilon(1e-5));
  const ReducedPair r = build_reduced(three_block());
  CHECK(std::abs(cumulative_mass(t_continuation(r.pf_value, r), three_block()) - 1.0) < 1e-3);

  FixedPointSolution loose;
  loose.u = 0.25;
  loose.psi = Eigen::VectorXd::Ones(1);
  loose.converged = false;
  try {
    cumulative_mass(loose, circular());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotConverged);
  }
}

TEST_CASE("mass_within and annulus_mass") {
  const double radius = spectral_radius(two_block());
  CHECK(std::abs(annulus_mass(two_block(), 0.0, radius) - 1.0) < 1e-3);
  CHECK(annulus_mass(two_block(), 1.5, 1.5) == 0.0);
  CHECK(std::abs(annulus_mass(circular(), 0.3, 0.6) - 0.27) < 1e-3);
  CHECK(mass_within(circular(), 5.0) == mass_within(circular(), 1.0));
  CHECK_THROWS_AS(annulus_mass(circular(), 0.6, 0.3), Error);
  CHECK_THROWS_AS(annulus_mass(circular(), -0.1, 0.3), Error);
}

TEST_CASE("cartesian_cross_check") {
  SUBCASE("circular law at 0.3 + 0.4i") {
    const std::complex<double> z(0.3, 0.4);
    const auto pts = cartesian_cross_check(circular(), std::span(&z, 1), 1e-3);
    REQUIRE(pts.size() == 1);
    CHECK(std::abs(pts[0].f_cartesian - kInvPi) < 1e-4);
    CHECK(std::abs(pts[0].f_cartesian_imag) < 1e-6);
  }
  SUBCASE("rotation invariance") {
    std::vector<std::complex<double>> zs;
    for (const double theta : {0.0, 0.7, 2.1, 4.0}) zs.push_back(std::polar(1.3, theta));
    const auto pts = cartesian_cross_check(two_block(), zs, 1e-3);
    for (const auto& p : pts) {
      CHECK(std::abs(p.f_cartesian - pts[0].f_cartesian) < 1e-6);
      CHECK(std::abs(p.f_cartesian_imag) < 1e-6);
    }
  }
  SUBCASE("two-block example agrees with the radial route") {
    const std::complex<double> z(1.0, 0.0);
    const auto pts = cartesian_cross_check(two_block(), std::span(&z, 1), 1e-3);
    CHECK(pts[0].abs_diff < 1e-3);
    CHECK(pts[0].f_cartesian > 0.0);
  }
  SUBCASE("points too close to the edge are rejected") {
    const std::complex<double> z(0.999, 0.0);
    CHECK_THROWS_AS(cartesian_cross_check(circular(), std::span(&z, 1), 1e-3), Error);
  }
}
