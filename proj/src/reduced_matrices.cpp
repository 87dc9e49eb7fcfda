#include "blockspec/reduced_matrices.hpp"

#include <cmath>
#include <sstream>

#include "blockspec/error.hpp"

namespace blockspec {

PerronPair perron_eigenpair(const Eigen::MatrixXd& m, const PowerIterationOptions& opts) {
  const Eigen::Index d = m.rows();
  if (d == 0 || m.cols() != d) {
    throw Error(ErrorCode::kInvalidArgument, "perron_eigenpair needs a nonempty square matrix");
  }
  if (!(m.array() > 0.0).all() || !m.allFinite()) {
    throw Error(ErrorCode::kNonPositiveMatrix, "all entries must be strictly positive");
  }

  // Iterate on the simplex: v has unit 1-norm, so sum(Mv) is the eigenvalue
  // estimate once v has settled.
  Eigen::VectorXd v = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  Eigen::VectorXd next(d);
  for (int it = 1; it <= opts.max_iter; ++it) {
    next.noalias() = m * v;
    const double sum = next.sum();
    next /= sum;
    const double change = (next - v).cwiseAbs().maxCoeff();
    v.swap(next);
    if (change < opts.tol) {
      // The vector is settled to tol but the eigenvalue estimate still carries
      // an error of that order; keep going while the steps keep shrinking.
      double last = change;
      for (int extra = 0; extra < 10000 && it < opts.max_iter; ++extra, ++it) {
        next.noalias() = m * v;
        next /= next.sum();
        const double step = (next - v).cwiseAbs().maxCoeff();
        if (!(step < last)) break;
        v.swap(next);
        last = step;
      }
      next.noalias() = m * v;
      return {next.sum(), v, it};
    }
  }
  std::ostringstream msg;
  msg << "power iteration did not settle within " << opts.max_iter << " iterations";
  throw Error(ErrorCode::kNoConvergence, msg.str());
}

double closed_form_dominant_2x2(const Eigen::Matrix2d& m) {
  const double tr = m.trace();
  const double det = m.determinant();
  return 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
}

ReducedPair build_reduced(const BlockStructure& structure) {
  validate(structure);
  const Eigen::Index d = structure.alpha.size();
  ReducedPair out;
  out.alpha = structure.alpha;
  const Eigen::MatrixXd g2 = structure.g.array().square();
  out.G = structure.alpha.asDiagonal() * g2;
  out.Ghat = structure.alpha.asDiagonal() * g2.transpose();

  const PerronPair pf = perron_eigenpair(out.G);
  out.pf_value = pf.value;
  out.pf_vector = pf.vector;

  // Built-in oracle for the small cases.
  double exact = pf.value;
  if (d == 1) exact = out.G(0, 0);
  if (d == 2) exact = closed_form_dominant_2x2(out.G.topLeftCorner<2, 2>());
  if (std::abs(exact - pf.value) > 1e-12 * std::max(1.0, exact)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "power iteration eigenvalue " << pf.value << " disagrees with closed form " << exact;
    throw Error(ErrorCode::kNoConvergence, msg.str());
  }
  return out;
}

double spectral_radius(const BlockStructure& structure) {
  return std::sqrt(build_reduced(structure).pf_value);
}

}  // namespace blockspec
