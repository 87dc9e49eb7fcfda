#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "blockspec/block_model.hpp"
#include "blockspec/stieltjes_solver.hpp"

namespace blockspec {

inline constexpr std::size_t kDefaultRadialBins = 50;
inline constexpr double kHistogramReach = 1.2;  // histogram spans [0, 1.2 * radius]

/// All N eigenvalues of a dense square matrix (LAPACK geev: balancing,
/// Hessenberg reduction, shifted QR). Real input takes the real driver so
/// conjugate pairs and real eigenvalues come out exact.
std::vector<std::complex<double>> spectrum(const Eigen::MatrixXcd& matrix);
std::vector<std::complex<double>> spectrum(const SampledMatrix& matrix);

struct EmpiricalSpectrum {
  std::vector<std::complex<double>> eigenvalues;  // trial k occupies [k N, (k + 1) N)
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double empirical_radius = 0.0;
  std::vector<double> bin_edges;     // uniform in r
  std::vector<std::size_t> counts;   // the last bin also holds anything past the top edge
};

/// Spectra of sample_matrix(structure, n, seed, k) for k = 0 .. trials - 1.
EmpiricalSpectrum run_trials(const BlockStructure& structure, std::size_t n, std::size_t trials,
                             std::uint64_t seed, unsigned workers = 0,
                             std::size_t bins = kDefaultRadialBins);

/// Fills bin_edges / counts over [0, top] and sets empirical_radius.
void fill_histogram(EmpiricalSpectrum& spectrum, double top, std::size_t bins);

struct BinComparison {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double empirical_mass = 0.0;
  double theory_mass = 0.0;
  double diff = 0.0;  // empirical - theory
};

struct ComparisonReport {
  double ks_radial = 0.0;
  double radius_rel_err = 0.0;
  double theory_radius = 0.0;
  double empirical_radius = 0.0;
  std::vector<BinComparison> per_bin;
};

/// Radial KS distance (over the bin edges) between the eigenvalue moduli and
/// the limiting cumulative mass, plus the relative spectral-radius error.
ComparisonReport compare(const EmpiricalSpectrum& empirical, const BlockStructure& structure,
                         const SolverParams& params = {}, unsigned workers = 0);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson chi-square test of uniformity of arg(lambda) over `bins` sectors.
ChiSquareResult angular_uniformity(std::span<const std::complex<double>> eigenvalues,
                                   std::size_t bins = 36);

std::size_t count_near_real_axis(std::span<const std::complex<double>> eigenvalues, double tol);

double fraction_beyond(std::span<const std::complex<double>> eigenvalues, double radius);

}  // namespace blockspec
