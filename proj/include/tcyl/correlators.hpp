#pragma once

// Schwinger two-point estimation and the structural checks run on it:
// reflection (KMS) periodicity, OS positivity, spatial clustering, and the
// time/space exchange between transposed runs.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tcyl/lattice.hpp"
#include "tcyl/report.hpp"

namespace tcyl {

namespace detail {
class Fft2d;
}

/// Translation-averaged estimator (1/V) sum_p phi(p) phi(p + d) for one
/// configuration, computed with FFTs.  Row-major over d = (dt, dx).
std::vector<double> two_point_single(const FieldConfig& cfg);

/// Same quantity by the direct O(V^2) double loop.
std::vector<double> two_point_direct(const FieldConfig& cfg);

/// Bin-level data kept alongside a correlator for resampling.
struct CorrelatorBin {
  std::vector<double> s;    // full correlator averaged over the bin
  double field_mean = 0.0;  // lattice-averaged phi averaged over the bin
};

/// Estimate of S(dt, dx) = <phi(0,0) phi(dt,dx)> on lattice separations.
struct CorrelatorGrid {
  LatticeSpec spec;
  double mass = 0.0;
  std::vector<double> s;
  std::vector<double> err;
  bool connected = false;
  bool symmetrized = false;
  std::vector<CorrelatorBin> bins;  // empty for exact (error-free) grids
  std::size_t n_samples = 0;
  std::size_t bin_length = 0;  // measurements per bin
  double tau_int = 0.5;        // largest integrated autocorrelation time seen (measurements)
  std::vector<std::string> warnings;

  double at(int dt, int dx) const;
  double error_at(int dt, int dx) const;

  /// Grid holding an exact kernel with zero errors.
  static CorrelatorGrid exact(const LatticeCovariance& cov);
};

/// Streams configurations of one chain into fixed-size blocks.
class CorrelatorAccumulator {
 public:
  CorrelatorAccumulator(const LatticeSpec& spec, std::size_t block_size);
  ~CorrelatorAccumulator();
  CorrelatorAccumulator(CorrelatorAccumulator&&) noexcept;
  CorrelatorAccumulator& operator=(CorrelatorAccumulator&&) noexcept;

  void add(const FieldConfig& cfg);
  std::size_t count() const { return count_; }
  const LatticeSpec& spec() const { return spec_; }

 private:
  friend CorrelatorGrid build_correlator(std::span<const CorrelatorAccumulator>, double, std::size_t);

  LatticeSpec spec_;
  std::size_t block_size_;
  std::size_t count_ = 0;
  std::unique_ptr<detail::Fft2d> fft_;
  std::vector<double> current_;
  double current_mean_ = 0.0;
  std::size_t in_block_ = 0;
  std::vector<CorrelatorBin> blocks_;
  std::vector<double> field_series_;   // per measurement
  std::vector<double> origin_series_;  // S(0,0) per measurement
};

/// Merges chain accumulators (in the given order) into one raw grid.  Blocks
/// are re-binned so that each bin spans >= 6 tau_int measurements while
/// keeping at least `min_bins` bins; a shortfall is recorded as a warning.
CorrelatorGrid build_correlator(std::span<const CorrelatorAccumulator> chains, double mass,
                                std::size_t min_bins = 20);

/// Raw estimator over a stored sample series (>= 100 configurations).
CorrelatorGrid schwinger_two_point(std::span<const FieldConfig> samples, const LatticeSpec& spec,
                                   double mass);
/// Same on a unit-spacing lattice inferred from the samples.
CorrelatorGrid schwinger_two_point(std::span<const FieldConfig> samples);

/// Average over the four reflections (dt, dx) -> (+-dt, +-dx); exact by construction.
CorrelatorGrid symmetrize(const CorrelatorGrid& grid);

/// Subtract <phi>^2 (jackknife errors).
CorrelatorGrid connected(const CorrelatorGrid& grid);

/// Two-sided z threshold for a 3-sigma test Bonferroni-corrected over `comparisons`.
double bonferroni_threshold(std::size_t comparisons, double sigma = 3.0);

/// max |S(tau, x) - S(beta - tau, x)| / error over the raw grid.
CheckReport kms_periodicity_check(const CorrelatorGrid& raw);

/// Minimum eigenvalue of M_ij = S(tau_i + tau_j, 0), tau_i = 1..n_t/4 lattice units,
/// with a bootstrap error over bins.  PASS iff min eig > -3 sigma.
CheckReport os_positivity_check(const CorrelatorGrid& grid, std::uint64_t seed = 12345,
                                int n_bootstrap = 200);

/// Log-linear fit of |S_conn(0, x)| on x in [L/8, L/4].  PASS iff rate > 0 at 3 sigma;
/// INCONCLUSIVE when the window is noise-dominated.
CheckReport clustering_check(const CorrelatorGrid& grid);

/// Compares run_a at (tau, x) with run_b at (x, tau).  Throws InvalidParameter
/// if run_b's lattice is not the transpose of run_a's.
CheckReport nelson_symmetry_check(const CorrelatorGrid& run_a, const CorrelatorGrid& run_b);

struct DecayFit {
  double rate = 0.0;   // physical units (per unit length)
  double error = 0.0;  // jackknife over bins; 0 for exact grids
};

/// Decay rate of the zero-momentum connected correlator sum_tau S_conn(tau, x)
/// from cosh effective masses on x in [x_lo, x_hi] (lattice units).
DecayFit zero_momentum_decay(const CorrelatorGrid& grid, int x_lo, int x_hi);

/// Compares a grid with an exact lattice covariance at the given separations
/// (lattice units).  PASS iff every |S - C| is within `sigma` standard errors.
CheckReport covariance_match_check(const CorrelatorGrid& grid, const LatticeCovariance& exact,
                                   std::span<const std::pair<int, int>> separations, double sigma = 3.0);

/// CSV with header `dtau,dx,S,err`, one row per lattice separation, full precision.
std::string correlator_csv(const CorrelatorGrid& grid);
/// Inverse of correlator_csv; `spec` supplies the lattice.  Bins are not stored.
CorrelatorGrid read_correlator_csv(const std::string& text, const LatticeSpec& spec);

/// Minimum eigenvalue of a symmetric matrix given row-major.
double min_eigenvalue(std::span<const double> matrix, int n);

}  // namespace tcyl
