#include "blockspec/stieltjes_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blockspec {

void SolverParams::validate() const {
  auto fail = [](const char* field, const char* why) {
    throw Error(ErrorCode::kInvalidArgument, std::string(field) + " " + why);
  };
  if (!(tol > 0.0)) fail("tol", "must be positive");
  if (max_iter < 1) fail("max_iter", "must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) fail("damping", "must lie in (0, 1]");
  if (!(t_min > 0.0)) fail("t_min", "must be positive");
  if (!(t_min < t0)) fail("t_min", "must be smaller than t0");
  if (!(vanish_threshold > 0.0)) fail("vanish_threshold", "must be positive");
}

namespace {

// Coupling matrices and scratch vectors for the iteration, so the hot loop
// does not allocate. Row c of G^T is (alpha_d g(d, c)^2)_d: the self-energy of
// block c collects the variance of column block c weighted by the fraction of
// each row block, and likewise Ghat^T for the other diagonal block.
struct Workspace {
  Eigen::MatrixXd coupling, coupling_hat;
  Eigen::VectorXd x, y, h_next, hhat_next;

  explicit Workspace(const ReducedPair& reduced)
      : coupling(reduced.G.transpose()),
        coupling_hat(reduced.Ghat.transpose()),
        x(reduced.blocks()),
        y(reduced.blocks()),
        h_next(reduced.blocks()),
        hhat_next(reduced.blocks()) {}

  // x = G^Th + t, y = Ghat^Thhat + t.
  void fields(const Eigen::VectorXd& h, const Eigen::VectorXd& hhat, double t) {
    x.noalias() = coupling * h;
    y.noalias() = coupling_hat * hhat;
    x.array() += t;
    y.array() += t;
  }

  // Damped update into h_next / hhat_next.
  void step(const Eigen::VectorXd& h, const Eigen::VectorXd& hhat, double u, double t,
            double damping) {
    fields(h, hhat, t);
    for (Eigen::Index c = 0; c < h.size(); ++c) {
      const double denom = u + x[c] * y[c];
      h_next[c] = (1.0 - damping) * h[c] + damping * (x[c] / denom);
      hhat_next[c] = (1.0 - damping) * hhat[c] + damping * (y[c] / denom);
    }
  }
};

void check_inputs(double u, double t, const ReducedPair& reduced) {
  if (!(u >= 0.0) || !std::isfinite(u)) {
    throw Error(ErrorCode::kInvalidArgument, "u must be a finite nonnegative number");
  }
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidArgument, "t must be a finite positive number");
  }
  if (reduced.blocks() == 0) throw Error(ErrorCode::kInvalidArgument, "empty reduced pair");
}

void finalize(FixedPointSolution& s, const ReducedPair& reduced, const SolverParams& params) {
  s.psi = psi_of(s.h, s.hhat, s.u, s.t, reduced);
  s.weighted_h = reduced.alpha.dot(s.h);
  s.interior = s.weighted_h >= params.vanish_threshold;
}

}  // namespace

Eigen::VectorXd psi_of(const Eigen::VectorXd& h, const Eigen::VectorXd& hhat, double u, double t,
                       const ReducedPair& reduced) {
  Workspace ws(reduced);
  ws.fields(h, hhat, t);
  return (u + ws.x.array() * ws.y.array()).inverse().matrix();
}

void rebalance(Eigen::VectorXd& h, Eigen::VectorXd& hhat, const Eigen::VectorXd& alpha) {
  const double mass = alpha.dot(h);
  const double mass_hat = alpha.dot(hhat);
  if (!(mass > 0.0) || !(mass_hat > 0.0)) return;
  const double scale = std::sqrt(mass_hat / mass);
  h *= scale;
  hhat /= scale;
}

HPair iterate_once(const Eigen::VectorXd& h, const Eigen::VectorXd& hhat, double u, double t,
                   const ReducedPair& reduced, double damping) {
  check_inputs(u, t, reduced);
  if (h.size() != reduced.blocks() || hhat.size() != reduced.blocks()) {
    throw Error(ErrorCode::kInvalidArgument, "h and hhat must have D entries");
  }
  Workspace ws(reduced);
  ws.step(h, hhat, u, t, damping);
  return {ws.h_next, ws.hhat_next};
}

FixedPointSolution solve(double u, double t, const ReducedPair& reduced,
                         const SolverParams& params, const std::optional<HPair>& warm_start) {
  check_inputs(u, t, reduced);
  params.validate();
  const Eigen::Index d = reduced.blocks();

  FixedPointSolution s;
  s.u = u;
  s.t = t;
  if (warm_start) {
    if (warm_start->first.size() != d || warm_start->second.size() != d) {
      throw Error(ErrorCode::kInvalidArgument, "warm start has the wrong dimension");
    }
    // Projecting onto [0, 1/t] keeps a start taken from a larger t admissible.
    s.h = warm_start->first.cwiseMax(0.0).cwiseMin(1.0 / t);
    s.hhat = warm_start->second.cwiseMax(0.0).cwiseMin(1.0 / t);
  } else {
    s.h = Eigen::VectorXd::Zero(d);
    s.hhat = Eigen::VectorXd::Zero(d);
  }

  Workspace ws(reduced);
  const double cap = 1.0 / t;
  for (s.iterations = 1; s.iterations <= params.max_iter; ++s.iterations) {
    ws.step(s.h, s.hhat, u, t, params.damping);
    rebalance(ws.h_next, ws.hhat_next, reduced.alpha);
    double change = 0.0;
    for (Eigen::Index c = 0; c < d; ++c) {
      ws.h_next[c] = std::min(ws.h_next[c], cap);
      ws.hhat_next[c] = std::min(ws.hhat_next[c], cap);
      change = std::max({change, std::abs(ws.h_next[c] - s.h[c]),
                         std::abs(ws.hhat_next[c] - s.hhat[c])});
    }
    s.h.swap(ws.h_next);
    s.hhat.swap(ws.hhat_next);
    if (change < params.tol) {
      s.converged = true;
      break;
    }
  }
  if (!s.converged) s.iterations = params.max_iter;
  finalize(s, reduced, params);
  if (!s.converged) {
    std::ostringstream msg;
    msg << "fixed-point iteration at u = " << u << ", t = " << t << " did not converge within "
        << params.max_iter << " iterations";
    throw NoConvergenceError(msg.str(), std::move(s));
  }
  return s;
}

FixedPointSolution t_continuation(double u, const ReducedPair& reduced, const SolverParams& params,
                                  const std::optional<HPair>& warm_start) {
  params.validate();
  std::optional<HPair> start = warm_start;
  long total_iterations = 0;
  double t = params.t0;
  for (;;) {
    FixedPointSolution level = solve(u, t, reduced, params, start);
    total_iterations += level.iterations;
    if (t == params.t_min) {
      level.iterations = total_iterations;
      return level;
    }
    start = HPair{std::move(level.h), std::move(level.hhat)};
    t = std::max(0.5 * t, params.t_min);
  }
}

std::vector<std::complex<double>> b_values(const FixedPointSolution& solution,
                                           std::complex<double> z) {
  const double u = std::norm(z);
  if (std::abs(u - solution.u) > 1e-12 * std::max(1.0, solution.u)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "|z|^2 = " << u << " does not match the solution's u = " << solution.u;
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
  const auto d = static_cast<std::size_t>(solution.psi.size());
  std::vector<std::complex<double>> b(d);
  if (solution.interior) {
    for (std::size_t c = 0; c < d; ++c) b[c] = -z * solution.psi[static_cast<Eigen::Index>(c)];
    return b;
  }
  if (z == 0.0) {
    throw Error(ErrorCode::kZeroZOutsideSupport, "z = 0 classified as outside the support");
  }
  std::fill(b.begin(), b.end(), -1.0 / std::conj(z));
  return b;
}

}  // namespace blockspec
