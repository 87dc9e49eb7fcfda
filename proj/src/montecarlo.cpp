#include "blockspec/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <lapacke.h>

#include "blockspec/density.hpp"
#include "blockspec/error.hpp"
#include "blockspec/parallel.hpp"
#include "blockspec/reduced_matrices.hpp"

extern "C" void openblas_set_num_threads(int num_threads);

namespace blockspec {

namespace {

// Parallelism lives at the trial level; BLAS threading would make the
// floating-point reduction order depend on the machine.
void pin_blas_single_threaded() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

std::vector<std::complex<double>> real_spectrum(const Eigen::MatrixXcd& matrix) {
  const auto n = static_cast<lapack_int>(matrix.rows());
  Eigen::MatrixXd a = matrix.real();
  std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(),
                                        wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw Error(ErrorCode::kEigensolverFailure, "dgeev returned info = " + std::to_string(info));
  }
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {wr[k], wi[k]};
  return out;
}

std::vector<std::complex<double>> complex_spectrum(const Eigen::MatrixXcd& matrix) {
  const auto n = static_cast<lapack_int>(matrix.rows());
  Eigen::MatrixXcd a = matrix;
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()),
                    n, reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw Error(ErrorCode::kEigensolverFailure, "zgeev returned info = " + std::to_string(info));
  }
  return w;
}

// Sorted moduli, for CDF evaluation.
std::vector<double> sorted_moduli(std::span<const std::complex<double>> values) {
  std::vector<double> r(values.size());
  std::transform(values.begin(), values.end(), r.begin(), [](auto z) { return std::abs(z); });
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace

std::vector<std::complex<double>> spectrum(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "spectrum needs a square matrix");
  }
  if (matrix.size() == 0) return {};
  if (!matrix.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix has non-finite entries");
  }
  pin_blas_single_threaded();
  if ((matrix.imag().array() == 0.0).all()) return real_spectrum(matrix);
  return complex_spectrum(matrix);
}

std::vector<std::complex<double>> spectrum(const SampledMatrix& matrix) {
  return spectrum(matrix.entries);
}

void fill_histogram(EmpiricalSpectrum& s, double top, std::size_t bins) {
  if (bins == 0 || !(top > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "histogram needs bins > 0 and a positive top edge");
  }
  s.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    s.bin_edges[b] = top * static_cast<double>(b) / static_cast<double>(bins);
  }
  s.counts.assign(bins, 0);
  s.empirical_radius = 0.0;
  for (const auto z : s.eigenvalues) {
    const double r = std::abs(z);
    s.empirical_radius = std::max(s.empirical_radius, r);
    auto b = static_cast<std::size_t>(r / top * static_cast<double>(bins));
    ++s.counts[std::min(b, bins - 1)];
  }
}

EmpiricalSpectrum run_trials(const BlockStructure& structure, std::size_t n, std::size_t trials,
                             std::uint64_t seed, unsigned workers, std::size_t bins) {
  validate(structure);
  if (n < 10) throw Error(ErrorCode::kInvalidArgument, "N must be at least 10");
  if (trials < 1) throw Error(ErrorCode::kInvalidArgument, "trials must be at least 1");

  EmpiricalSpectrum out;
  out.n = n;
  out.trials = trials;
  out.seed = seed;
  out.eigenvalues.resize(n * trials);
  parallel_for(trials, resolve_workers(workers), [&](std::size_t k) {
    const auto eig = spectrum(sample_matrix(structure, n, seed, k));
    std::copy(eig.begin(), eig.end(), out.eigenvalues.begin() + static_cast<std::ptrdiff_t>(k * n));
  });
  fill_histogram(out, kHistogramReach * spectral_radius(structure), bins);
  return out;
}

ComparisonReport compare(const EmpiricalSpectrum& empirical, const BlockStructure& structure,
                         const SolverParams& params, unsigned workers) {
  if (empirical.eigenvalues.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empirical spectrum is empty");
  }
  if (empirical.bin_edges.size() < 2 || empirical.counts.size() + 1 != empirical.bin_edges.size()) {
    throw Error(ErrorCode::kInvalidArgument, "empirical spectrum has no histogram");
  }
  const ReducedPair reduced = build_reduced(structure);
  const double radius = std::sqrt(reduced.pf_value);
  const auto& edges = empirical.bin_edges;

  std::vector<double> theory(edges.size());
  parallel_for(edges.size(), resolve_workers(workers), [&](std::size_t k) {
    const double u = edges[k] * edges[k];
    if (u == 0.0) {
      theory[k] = 0.0;
    } else if (u >= reduced.pf_value) {
      theory[k] = 1.0;
    } else {
      theory[k] = cumulative_mass(t_continuation(u, reduced, params), structure);
    }
  });

  const std::vector<double> moduli = sorted_moduli(empirical.eigenvalues);
  const auto total = static_cast<double>(moduli.size());

  ComparisonReport report;
  report.theory_radius = radius;
  report.empirical_radius = moduli.back();
  report.radius_rel_err = std::abs(report.empirical_radius - radius) / radius;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto below = std::upper_bound(moduli.begin(), moduli.end(), edges[k]) - moduli.begin();
    const double cdf = static_cast<double>(below) / total;
    report.ks_radial = std::max(report.ks_radial, std::abs(cdf - theory[k]));
  }

  const std::size_t bins = empirical.counts.size();
  report.per_bin.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    BinComparison& bin = report.per_bin[b];
    bin.r_lo = edges[b];
    bin.r_hi = edges[b + 1];
    bin.empirical_mass = static_cast<double>(empirical.counts[b]) / total;
    bin.theory_mass = (b + 1 == bins ? 1.0 : theory[b + 1]) - theory[b];
    bin.diff = bin.empirical_mass - bin.theory_mass;
  }
  return report;
}

ChiSquareResult angular_uniformity(std::span<const std::complex<double>> eigenvalues,
                                   std::size_t bins) {
  if (bins < 2 || eigenvalues.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "chi-square needs at least 2 bins and 1 value");
  }
  std::vector<std::size_t> counts(bins, 0);
  for (const auto z : eigenvalues) {
    const double turn = (std::arg(z) + std::numbers::pi) / (2.0 * std::numbers::pi);
    ++counts[std::min(static_cast<std::size_t>(turn * static_cast<double>(bins)), bins - 1)];
  }
  const double expected = static_cast<double>(eigenvalues.size()) / static_cast<double>(bins);
  ChiSquareResult out;
  for (const auto c : counts) {
    const double diff = static_cast<double>(c) - expected;
    out.statistic += diff * diff / expected;
  }
  out.dof = static_cast<int>(bins) - 1;
  const boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

std::size_t count_near_real_axis(std::span<const std::complex<double>> eigenvalues, double tol) {
  return static_cast<std::size_t>(std::count_if(
      eigenvalues.begin(), eigenvalues.end(), [tol](auto z) { return std::abs(z.imag()) <= tol; }));
}

double fraction_beyond(std::span<const std::complex<double>> eigenvalues, double radius) {
  if (eigenvalues.empty()) return 0.0;
  const auto beyond = std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                    [radius](auto z) { return std::abs(z) > radius; });
  return static_cast<double>(beyond) / static_cast<double>(eigenvalues.size());
}

}  // namespace blockspec
