#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blockspec/block_model.hpp"
#include "blockspec/reduced_matrices.hpp"
#include "blockspec/stieltjes_solver.hpp"

namespace blockspec {

inline constexpr int kDefaultGridPoints = 513;
// Consecutive u-nodes solved as one warm-started chain.
inline constexpr std::size_t kDensityChunk = 64;

// Limiting density on a grid uniform in u = r^2 over [0, rho(G)].
struct RadialDensity {
  std::vector<double> r_grid;
  std::vector<double> u_grid;
  std::vector<double> f;  // planar density, per unit area
  std::vector<double> p;  // 2 pi r f, per unit radius
  std::vector<double> M;  // mass of the disk of radius r
  double radius = 0.0;
  Eigen::MatrixXd psi_grid;  // D x grid length

  std::size_t size() const { return r_grid.size(); }
};

/// Solves the fixed point at every node and differentiates
/// m(u) = sum_c alpha_c u psi_c(u) to get f = m'(u) / pi.
/// Throws kSolverFailure naming the first node that failed.
RadialDensity density_grid(const BlockStructure& structure, int grid_points = kDefaultGridPoints,
                           const SolverParams& params = {}, unsigned workers = 0);

/// sum_c alpha_c u psi_c(u) at the solution's u, clamped to [0, 1].
double cumulative_mass(const FixedPointSolution& solution, const BlockStructure& structure);

/// Mass of the disk of radius r; radii past the support edge count as the edge.
double mass_within(const BlockStructure& structure, double r, const SolverParams& params = {});

double annulus_mass(const BlockStructure& structure, double r1, double r2,
                    const SolverParams& params = {});

struct CrossCheckPoint {
  std::complex<double> z;
  double f_cartesian = 0.0;       // Re of -(1/pi) d/dz sum_c alpha_c b_c
  double f_cartesian_imag = 0.0;  // Im of the same; zero in exact arithmetic
  double f_radial = 0.0;
  double abs_diff = 0.0;
};

/// Evaluates the density at each z twice: by centered 2D differences of the
/// b-values (d/dz = (d/dx - i d/dy) / 2) and by the radial u-derivative.
std::vector<CrossCheckPoint> cartesian_cross_check(const BlockStructure& structure,
                                                   std::span<const std::complex<double>> z_list,
                                                   double step, const SolverParams& params = {},
                                                   unsigned workers = 0);

}  // namespace blockspec
