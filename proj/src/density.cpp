#include "blockspec/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "blockspec/error.hpp"
#include "blockspec/parallel.hpp"

namespace blockspec {

namespace {

double raw_mass(const FixedPointSolution& s, const Eigen::VectorXd& alpha) {
  return s.u * alpha.dot(s.psi);
}

std::complex<double> weighted_b(const ReducedPair& reduced, const SolverParams& params,
                                std::complex<double> z) {
  const FixedPointSolution s = t_continuation(std::norm(z), reduced, params);
  const auto b = b_values(s, z);
  std::complex<double> sum = 0.0;
  for (std::size_t c = 0; c < b.size(); ++c) sum += reduced.alpha[static_cast<Eigen::Index>(c)] * b[c];
  return sum;
}

double mass_at_u(const ReducedPair& reduced, const SolverParams& params, double u) {
  if (u == 0.0) return 0.0;
  return raw_mass(t_continuation(u, reduced, params), reduced.alpha);
}

}  // namespace

RadialDensity density_grid(const BlockStructure& structure, int grid_points,
                           const SolverParams& params, unsigned workers) {
  if (grid_points < 9) {
    throw Error(ErrorCode::kInvalidArgument, "grid_points must be at least 9");
  }
  params.validate();
  const ReducedPair reduced = build_reduced(structure);
  const auto n = static_cast<std::size_t>(grid_points);
  const double rho = reduced.pf_value;
  const double du = rho / static_cast<double>(n - 1);

  RadialDensity out;
  out.radius = std::sqrt(rho);
  out.u_grid.resize(n);
  out.r_grid.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.u_grid[k] = (k + 1 == n) ? rho : du * static_cast<double>(k);
    out.r_grid[k] = std::sqrt(out.u_grid[k]);
  }

  std::vector<FixedPointSolution> nodes(n);
  const std::size_t chunks = (n + kDensityChunk - 1) / kDensityChunk;
  parallel_for(chunks, resolve_workers(workers), [&](std::size_t chunk) {
    std::optional<HPair> warm;
    const std::size_t end = std::min(n, (chunk + 1) * kDensityChunk);
    for (std::size_t k = chunk * kDensityChunk; k < end; ++k) {
      try {
        nodes[k] = t_continuation(out.u_grid[k], reduced, params, warm);
      } catch (const NoConvergenceError& e) {
        std::ostringstream msg;
        msg << "node " << k << " (u = " << out.u_grid[k] << "): " << e.what();
        throw Error(ErrorCode::kSolverFailure, msg.str());
      }
      warm = HPair{nodes[k].h, nodes[k].hhat};
    }
  });

  const auto d = static_cast<Eigen::Index>(reduced.blocks());
  out.psi_grid.resize(d, static_cast<Eigen::Index>(n));
  std::vector<double> m(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.psi_grid.col(static_cast<Eigen::Index>(k)) = nodes[k].psi;
    m[k] = raw_mass(nodes[k], reduced.alpha);
  }

  out.f.resize(n);
  out.p.resize(n);
  out.M.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double slope;
    if (k == 0) {
      slope = (-3.0 * m[0] + 4.0 * m[1] - m[2]) / (2.0 * du);
    } else if (k + 1 == n) {
      slope = (3.0 * m[k] - 4.0 * m[k - 1] + m[k - 2]) / (2.0 * du);
    } else {
      slope = (m[k + 1] - m[k - 1]) / (2.0 * du);
    }
    out.f[k] = std::max(0.0, slope / std::numbers::pi);
    out.p[k] = 2.0 * std::numbers::pi * out.r_grid[k] * out.f[k];
    out.M[k] = std::clamp(m[k], 0.0, 1.0);
  }
  return out;
}

double cumulative_mass(const FixedPointSolution& solution, const BlockStructure& structure) {
  if (!solution.converged) {
    throw Error(ErrorCode::kNotConverged, "cumulative_mass needs a converged solution");
  }
  if (solution.psi.size() != structure.alpha.size()) {
    throw Error(ErrorCode::kInvalidArgument, "solution and structure disagree on D");
  }
  return std::clamp(raw_mass(solution, structure.alpha), 0.0, 1.0);
}

double mass_within(const BlockStructure& structure, double r, const SolverParams& params) {
  if (!(r >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "radius must be nonnegative");
  const ReducedPair reduced = build_reduced(structure);
  const double u = std::min(r * r, reduced.pf_value);
  if (u == 0.0) return 0.0;
  return cumulative_mass(t_continuation(u, reduced, params), structure);
}

double annulus_mass(const BlockStructure& structure, double r1, double r2,
                    const SolverParams& params) {
  if (!(r1 >= 0.0) || !(r2 >= r1)) {
    throw Error(ErrorCode::kInvalidArgument, "annulus needs 0 <= r1 <= r2");
  }
  if (r1 == r2) return 0.0;
  return mass_within(structure, r2, params) - mass_within(structure, r1, params);
}

std::vector<CrossCheckPoint> cartesian_cross_check(const BlockStructure& structure,
                                                   std::span<const std::complex<double>> z_list,
                                                   double step, const SolverParams& params,
                                                   unsigned workers) {
  if (!(step > 0.0)) throw Error(ErrorCode::kInvalidArgument, "step must be positive");
  params.validate();
  const ReducedPair reduced = build_reduced(structure);
  const double radius = std::sqrt(reduced.pf_value);
  for (const auto z : z_list) {
    if (!(std::abs(z) < radius - 2.0 * step)) {
      std::ostringstream msg;
      msg << "|z| = " << std::abs(z) << " is not below radius - 2 step = " << radius - 2.0 * step;
      throw Error(ErrorCode::kInvalidArgument, msg.str());
    }
  }

  std::vector<CrossCheckPoint> out(z_list.size());
  parallel_for(z_list.size(), resolve_workers(workers), [&](std::size_t k) {
    const std::complex<double> z = z_list[k];
    const std::complex<double> dx(step, 0.0);
    const std::complex<double> dy(0.0, step);
    const auto ddx = (weighted_b(reduced, params, z + dx) - weighted_b(reduced, params, z - dx)) /
                     (2.0 * step);
    const auto ddy = (weighted_b(reduced, params, z + dy) - weighted_b(reduced, params, z - dy)) /
                     (2.0 * step);
    const std::complex<double> dz = 0.5 * (ddx - std::complex<double>(0.0, 1.0) * ddy);
    const std::complex<double> f_cart = -dz / std::numbers::pi;

    // Radial route: the u-increment of a radial step of the same length.
    const double u0 = std::norm(z);
    const double r0 = std::abs(z);
    const double du = (r0 + step) * (r0 + step) - u0;
    double slope;
    if (u0 - du >= 0.0) {
      slope = (mass_at_u(reduced, params, u0 + du) - mass_at_u(reduced, params, u0 - du)) /
              (2.0 * du);
    } else {
      slope = (-3.0 * mass_at_u(reduced, params, u0) + 4.0 * mass_at_u(reduced, params, u0 + du) -
               mass_at_u(reduced, params, u0 + 2.0 * du)) /
              (2.0 * du);
    }

    CrossCheckPoint& pt = out[k];
    pt.z = z;
    pt.f_cartesian = f_cart.real();
    pt.f_cartesian_imag = f_cart.imag();
    pt.f_radial = slope / std::numbers::pi;
    pt.abs_diff = std::abs(pt.f_cartesian - pt.f_radial);
  });
  return out;
}

}  // namespace blockspec
