#pragma once

// Single-site Metropolis sampling of exp(-S[phi]) and the error analysis of
// the resulting time series.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tcyl/lattice.hpp"
#include "tcyl/rng.hpp"
#include "tcyl/wick.hpp"

namespace tcyl {

struct MCConfig {
  std::uint64_t seed = 1;
  int n_therm = 1000;
  int n_sweeps = 10000;
  int meas_interval = 1;
  double step_width = 1.0;  // initial half-width; tuned during thermalization
  int n_chains = 1;
  bool checkerboard = false;
  bool auto_tune = true;

  void validate() const;
  /// True when n_sweeps >= 100 * meas_interval.
  bool publishable() const { return n_sweeps >= 100 * meas_interval; }
};

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;
  double tau_int = 0.5;  // in units of the series spacing
  double n_eff = 0.0;
  std::size_t n_samples = 0;
};

enum class SweepOrder { Lexicographic, Checkerboard };

/// Accept with probability min(1, e^{-dS}); `u` is uniform in [0, 1).
inline bool metropolis_accept(double delta_s, double u) { return delta_s <= 0.0 || u < std::exp(-delta_s); }

/// One pass of single-site updates phi -> phi + u, u ~ U(-w, w).  Returns the
/// acceptance rate.  Throws NumericalError on a non-finite action change.
double metropolis_sweep(FieldConfig& cfg, const LocalAction& action, double step_width, Rng& rng,
                        SweepOrder order = SweepOrder::Lexicographic);

/// Integrated autocorrelation time with Madras-Sokal self-consistent window
/// (smallest W with W >= 6 tau_int(W)).  Needs >= 100 points and non-zero variance.
double autocorrelation(std::span<const double> series);

/// Mean with autocorrelation-corrected error.
EstimatorResult estimate(std::span<const double> series);

/// Standard error of the mean from non-overlapping bins of `bin_size` (tail dropped).
double binned_error(std::span<const double> series, std::size_t bin_size);

/// Pools independent estimates, weighting by sample count.  Order-fixed.
EstimatorResult merge_estimates(std::span<const EstimatorResult> parts);

struct Observable {
  std::string name;
  std::function<double(const FieldConfig&)> fn;
};

/// phi averaged over the lattice, its square average, and phi at the origin.
std::vector<Observable> default_observables();

struct ChainResult {
  int chain = 0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;  // one per observable, one entry per measurement
  std::vector<double> acceptance;           // per sweep, thermalization included
  double step_width = 0.0;                  // frozen value used while measuring
  std::vector<EstimatorResult> estimates;   // empty if a series was too short
  std::vector<std::string> warnings;
  FieldConfig final_config;
};

/// Called with every measured configuration (chain index, measurement index, config).
using MeasurementHook = std::function<void(int, std::size_t, const FieldConfig&)>;

/// Thermalize (tuning the step width toward 50 % acceptance), then measure every
/// meas_interval sweeps.  Chain `chain` uses RNG stream `chain`; its start
/// configuration is a GFF draw from stream kAuxStreamBase + chain.
ChainResult run_chain(const ModelParams& params, const LatticeSpec& spec, const MCConfig& mc,
                      const std::vector<Observable>& observables, int chain = 0,
                      const MeasurementHook& hook = {});

/// Runs mc.n_chains independent chains on up to `threads` threads.  The hook
/// may be called concurrently for different chains.
std::vector<ChainResult> run_chains(const ModelParams& params, const LatticeSpec& spec, const MCConfig& mc,
                                    const std::vector<Observable>& observables, int threads,
                                    const MeasurementHook& hook = {});

}  // namespace tcyl
