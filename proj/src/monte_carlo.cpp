#include "tcyl/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "tcyl/errors.hpp"
#include "tcyl/quadrature.hpp"

namespace tcyl {

namespace {

constexpr double kTargetAcceptance = 0.5;
constexpr double kWindowFactor = 6.0;

void update_site(FieldConfig& cfg, const LocalAction& action, double w, Rng& rng, int t, int x,
                 int& accepted) {
  const double proposal = cfg(t, x) + rng.uniform(-w, w);
  const double ds = action.delta(cfg, t, x, proposal);
  if (!std::isfinite(ds)) {
    throw NumericalError("metropolis_sweep: non-finite action change (invalid interaction?)");
  }
  if (metropolis_accept(ds, rng.uniform())) {
    cfg(t, x) = proposal;
    ++accepted;
  }
}

double mean_of(std::span<const double> v) {
  CompensatedSum s;
  for (double x : v) s += x;
  return s.value() / static_cast<double>(v.size());
}

}  // namespace

void MCConfig::validate() const {
  if (n_therm < 0 || n_sweeps < 1 || meas_interval < 1 || n_chains < 1) {
    throw InvalidParameter("MCConfig: sweep counts must be positive");
  }
  if (!(step_width >= 0.0) || !std::isfinite(step_width)) {
    throw InvalidParameter("MCConfig: step_width must be non-negative");
  }
}

double metropolis_sweep(FieldConfig& cfg, const LocalAction& action, double step_width, Rng& rng,
                        SweepOrder order) {
  const auto& spec = action.spec();
  if (!cfg.matches(spec)) throw DimensionError("metropolis_sweep: configuration shape does not match lattice");
  int accepted = 0;
  if (order == SweepOrder::Lexicographic) {
    for (int t = 0; t < spec.n_t; ++t) {
      for (int x = 0; x < spec.n_x; ++x) update_site(cfg, action, step_width, rng, t, x, accepted);
    }
  } else {
    for (int color = 0; color < 2; ++color) {
      for (int t = 0; t < spec.n_t; ++t) {
        for (int x = (t + color) % 2; x < spec.n_x; x += 2) {
          update_site(cfg, action, step_width, rng, t, x, accepted);
        }
      }
    }
  }
  return static_cast<double>(accepted) / static_cast<double>(spec.volume());
}

double autocorrelation(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 100) throw InsufficientData("autocorrelation: need at least 100 points");
  const double mu = mean_of(series);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = series[i] - mu;
  const auto gamma = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += d[i] * d[i + lag];
    return s / static_cast<double>(n - lag);
  };
  const double g0 = gamma(0);
  if (!(g0 > 1e-300) || g0 <= 1e-28 * mu * mu) {
    throw InsufficientData("autocorrelation: series has no variance");
  }
  double tau = 0.5;
  const std::size_t max_window = n / 2;
  for (std::size_t w = 1; w <= max_window; ++w) {
    tau += gamma(w) / g0;
    if (static_cast<double>(w) >= kWindowFactor * tau) break;
  }
  return std::max(0.5, tau);
}

EstimatorResult estimate(std::span<const double> series) {
  EstimatorResult r;
  r.n_samples = series.size();
  r.mean = mean_of(series);
  r.tau_int = autocorrelation(series);
  double ss = 0.0;
  for (double x : series) ss += (x - r.mean) * (x - r.mean);
  const double n = static_cast<double>(series.size());
  const double var = ss / (n - 1.0);
  r.std_error = std::sqrt(var * 2.0 * r.tau_int / n);
  r.n_eff = n / (2.0 * r.tau_int);
  return r;
}

double binned_error(std::span<const double> series, std::size_t bin_size) {
  if (bin_size == 0) throw InvalidParameter("binned_error: bin size must be positive");
  const std::size_t n_bins = series.size() / bin_size;
  if (n_bins < 2) throw InsufficientData("binned_error: fewer than two bins");
  std::vector<double> bins(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) bins[b] = mean_of(series.subspan(b * bin_size, bin_size));
  const double mu = mean_of(bins);
  double ss = 0.0;
  for (double v : bins) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(n_bins - 1) / static_cast<double>(n_bins));
}

EstimatorResult merge_estimates(std::span<const EstimatorResult> parts) {
  if (parts.empty()) throw InsufficientData("merge_estimates: nothing to merge");
  std::size_t total = 0;
  for (const auto& p : parts) total += p.n_samples;
  if (total == 0) throw InsufficientData("merge_estimates: no samples");
  EstimatorResult r;
  r.n_samples = total;
  CompensatedSum mean;
  double var = 0.0;
  double n_eff = 0.0;
  for (const auto& p : parts) {
    const double w = static_cast<double>(p.n_samples) / static_cast<double>(total);
    mean += w * p.mean;
    var += w * w * p.std_error * p.std_error;
    n_eff += p.n_eff;
  }
  r.mean = mean.value();
  r.std_error = std::sqrt(var);
  r.n_eff = n_eff;
  r.tau_int = static_cast<double>(total) / (2.0 * n_eff);
  return r;
}

std::vector<Observable> default_observables() {
  return {
      {"phi_mean", [](const FieldConfig& c) { return c.mean(); }},
      {"phi2_mean",
       [](const FieldConfig& c) {
         CompensatedSum s;
         for (double v : c.values) s += v * v;
         return s.value() / static_cast<double>(c.values.size());
       }},
      {"phi_origin", [](const FieldConfig& c) { return c.values.front(); }},
  };
}

ChainResult run_chain(const ModelParams& params, const LatticeSpec& spec, const MCConfig& mc,
                      const std::vector<Observable>& observables, int chain, const MeasurementHook& hook) {
  params.validate();
  spec.validate_against(params);
  mc.validate();

  const double c = wick_constant(spec, params.mass);
  const LocalAction action(spec, params.mass, wick_order(params.poly, c));
  const SweepOrder order = mc.checkerboard ? SweepOrder::Checkerboard : SweepOrder::Lexicographic;

  ChainResult result;
  result.chain = chain;
  for (const auto& o : observables) result.names.push_back(o.name);
  result.series.resize(observables.size());
  result.acceptance.reserve(static_cast<std::size_t>(mc.n_therm + mc.n_sweeps));

  Rng start_rng(mc.seed, kAuxStreamBase + static_cast<std::uint64_t>(chain));
  FieldConfig cfg = sample_gff(spec, params.mass, start_rng);
  Rng rng(mc.seed, static_cast<std::uint64_t>(chain));

  double w = mc.step_width;
  for (int s = 0; s < mc.n_therm; ++s) {
    const double acc = metropolis_sweep(cfg, action, w, rng, order);
    result.acceptance.push_back(acc);
    if (mc.auto_tune && w > 0.0) {
      w = std::clamp(w * (1.0 + (acc - kTargetAcceptance)), 1e-8, 1e3);
    }
  }
  result.step_width = w;

  std::size_t n_meas = 0;
  CompensatedSum acc_measure;
  for (int s = 1; s <= mc.n_sweeps; ++s) {
    const double acc = metropolis_sweep(cfg, action, w, rng, order);
    result.acceptance.push_back(acc);
    acc_measure += acc;
    if (s % mc.meas_interval == 0) {
      for (std::size_t k = 0; k < observables.size(); ++k) result.series[k].push_back(observables[k].fn(cfg));
      if (hook) hook(chain, n_meas, cfg);
      ++n_meas;
    }
  }

  const double mean_acc = acc_measure.value() / mc.n_sweeps;
  if (mean_acc < 0.1 || mean_acc > 0.9) {
    std::ostringstream os;
    os << "chain " << chain << ": acceptance " << mean_acc << " outside [0.1, 0.9] after tuning";
    result.warnings.push_back(os.str());
  }
  if (!mc.publishable()) {
    result.warnings.push_back("chain " + std::to_string(chain) + ": n_sweeps < 100 * meas_interval");
  }
  for (std::size_t k = 0; k < observables.size(); ++k) {
    try {
      result.estimates.push_back(estimate(result.series[k]));
    } catch (const InsufficientData& e) {
      result.estimates.clear();
      result.warnings.push_back(observables[k].name + ": " + e.what());
      break;
    }
  }
  result.final_config = std::move(cfg);
  return result;
}

std::vector<ChainResult> run_chains(const ModelParams& params, const LatticeSpec& spec, const MCConfig& mc,
                                    const std::vector<Observable>& observables, int threads,
                                    const MeasurementHook& hook) {
  mc.validate();
  std::vector<ChainResult> results(static_cast<std::size_t>(mc.n_chains));
  std::vector<std::exception_ptr> errors(results.size());
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int i = next++; i < mc.n_chains; i = next++) {
      try {
        results[static_cast<std::size_t>(i)] = run_chain(params, spec, mc, observables, i, hook);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int n_threads = std::clamp(threads, 1, mc.n_chains);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace tcyl
