#include "tcyl/correlators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "fft.hpp"
#include "tcyl/errors.hpp"
#include "tcyl/field_io.hpp"
#include "tcyl/monte_carlo.hpp"
#include "tcyl/quadrature.hpp"

namespace tcyl {

namespace {

constexpr double kSigma = 3.0;
constexpr double kBinTauFactor = 6.0;

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

using Transform = std::function<std::vector<double>(const CorrelatorBin&)>;

CorrelatorBin average_bins(std::span<const CorrelatorBin> bins) {
  CorrelatorBin avg{std::vector<double>(bins.front().s.size(), 0.0), 0.0};
  for (const auto& b : bins) {
    for (std::size_t i = 0; i < avg.s.size(); ++i) avg.s[i] += b.s[i];
    avg.field_mean += b.field_mean;
  }
  const double inv = 1.0 / static_cast<double>(bins.size());
  for (double& v : avg.s) v *= inv;
  avg.field_mean *= inv;
  return avg;
}

struct JackknifeResult {
  std::vector<double> value;
  std::vector<double> error;
};

// Delete-one jackknife over bins of an arbitrary vector-valued function of the bin average.
JackknifeResult jackknife(std::span<const CorrelatorBin> bins, const Transform& f) {
  const std::size_t nb = bins.size();
  const CorrelatorBin total = average_bins(bins);
  JackknifeResult r{f(total), {}};
  const std::size_t dim = r.value.size();
  std::vector<std::vector<double>> loo(nb);
  std::vector<double> mean(dim, 0.0);
  for (std::size_t k = 0; k < nb; ++k) {
    CorrelatorBin avg{std::vector<double>(total.s.size()), 0.0};
    const double scale = static_cast<double>(nb) / static_cast<double>(nb - 1);
    const double inv = 1.0 / static_cast<double>(nb - 1);
    for (std::size_t i = 0; i < avg.s.size(); ++i) avg.s[i] = total.s[i] * scale - bins[k].s[i] * inv;
    avg.field_mean = total.field_mean * scale - bins[k].field_mean * inv;
    loo[k] = f(avg);
    for (std::size_t i = 0; i < dim; ++i) mean[i] += loo[k][i] / static_cast<double>(nb);
  }
  r.error.assign(dim, 0.0);
  for (std::size_t k = 0; k < nb; ++k) {
    for (std::size_t i = 0; i < dim; ++i) r.error[i] += (loo[k][i] - mean[i]) * (loo[k][i] - mean[i]);
  }
  const double factor = static_cast<double>(nb - 1) / static_cast<double>(nb);
  for (double& e : r.error) e = std::sqrt(factor * e);
  return r;
}

std::vector<double> symmetrize_vector(const LatticeSpec& spec, const std::vector<double>& s) {
  std::vector<double> out(s.size());
  for (int t = 0; t < spec.n_t; ++t) {
    for (int x = 0; x < spec.n_x; ++x) {
      const int mt = wrap(-t, spec.n_t);
      const int mx = wrap(-x, spec.n_x);
      out[spec.index(t, x)] =
          0.25 * ((s[spec.index(t, x)] + s[spec.index(mt, mx)]) + (s[spec.index(mt, x)] + s[spec.index(t, mx)]));
    }
  }
  return out;
}

// Maps a bin average onto the estimate the grid represents.
Transform grid_transform(const CorrelatorGrid& g) {
  const LatticeSpec spec = g.spec;
  const bool sym = g.symmetrized;
  const bool conn = g.connected;
  return [spec, sym, conn](const CorrelatorBin& b) {
    std::vector<double> s = sym ? symmetrize_vector(spec, b.s) : b.s;
    if (conn) {
      const double sub = b.field_mean * b.field_mean;
      for (double& v : s) v -= sub;
    }
    return s;
  };
}

void recompute(CorrelatorGrid& g) {
  if (g.bins.size() < 2) return;
  auto jk = jackknife(g.bins, grid_transform(g));
  g.s = std::move(jk.value);
  g.err = std::move(jk.error);
}

double normal_upper_quantile(double p) {
  return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<double>(), p));
}

CheckReport make_report(std::string name) {
  CheckReport r;
  r.name = std::move(name);
  return r;
}

// Effective cosh mass between x and x + 1 for a profile periodic with period n.
double cosh_mass(double c0, double c1, int x, int n) {
  const double h = 0.5 * n;
  const double r = c0 / c1;
  if (!(r > 1.0) || !std::isfinite(r)) return std::numeric_limits<double>::quiet_NaN();
  const auto ratio = [&](double e) { return std::cosh(e * (x - h)) / std::cosh(e * (x + 1 - h)); };
  double lo = 0.0;
  double hi = 1.0;
  while (ratio(hi) < r && hi < 200.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) < r ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> two_point_single(const FieldConfig& cfg) {
  detail::Fft2d fft(cfg.n_t, cfg.n_x);
  auto buf = fft.data();
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = cfg.values[i];
  fft.forward();
  for (auto& z : buf) z = std::norm(z);
  fft.backward();
  const double v = static_cast<double>(buf.size());
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real() / (v * v);
  return out;
}

std::vector<double> two_point_direct(const FieldConfig& cfg) {
  const LatticeSpec spec{cfg.n_t, cfg.n_x, 1.0, 1.0};
  std::vector<double> out(cfg.values.size(), 0.0);
  for (int dt = 0; dt < cfg.n_t; ++dt) {
    for (int dx = 0; dx < cfg.n_x; ++dx) {
      double s = 0.0;
      for (int t = 0; t < cfg.n_t; ++t) {
        for (int x = 0; x < cfg.n_x; ++x) s += cfg(t, x) * cfg((t + dt) % cfg.n_t, (x + dx) % cfg.n_x);
      }
      out[spec.index(dt, dx)] = s / static_cast<double>(cfg.values.size());
    }
  }
  return out;
}

double CorrelatorGrid::at(int dt, int dx) const { return s[spec.index(wrap(dt, spec.n_t), wrap(dx, spec.n_x))]; }

double CorrelatorGrid::error_at(int dt, int dx) const {
  return err[spec.index(wrap(dt, spec.n_t), wrap(dx, spec.n_x))];
}

CorrelatorGrid CorrelatorGrid::exact(const LatticeCovariance& cov) {
  CorrelatorGrid g;
  g.spec = cov.spec;
  g.mass = cov.mass;
  g.s = cov.position_kernel;
  g.err.assign(g.s.size(), 0.0);
  return g;
}

CorrelatorAccumulator::CorrelatorAccumulator(const LatticeSpec& spec, std::size_t block_size)
    : spec_(spec),
      block_size_(block_size),
      fft_(std::make_unique<detail::Fft2d>(spec.n_t, spec.n_x)),
      current_(spec.volume(), 0.0) {
  spec.validate();
  if (block_size == 0) throw InvalidParameter("CorrelatorAccumulator: block size must be positive");
}

CorrelatorAccumulator::~CorrelatorAccumulator() = default;
CorrelatorAccumulator::CorrelatorAccumulator(CorrelatorAccumulator&&) noexcept = default;
CorrelatorAccumulator& CorrelatorAccumulator::operator=(CorrelatorAccumulator&&) noexcept = default;

void CorrelatorAccumulator::add(const FieldConfig& cfg) {
  if (!cfg.matches(spec_)) throw DimensionError("CorrelatorAccumulator: configuration shape mismatch");
  auto buf = fft_->data();
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = cfg.values[i];
  fft_->forward();
  for (auto& z : buf) z = std::norm(z);
  fft_->backward();
  const double v = static_cast<double>(buf.size());
  const double norm = 1.0 / (v * v);
  for (std::size_t i = 0; i < buf.size(); ++i) current_[i] += buf[i].real() * norm;
  const double phi_bar = cfg.mean();
  current_mean_ += phi_bar;
  field_series_.push_back(phi_bar);
  origin_series_.push_back(buf[0].real() * norm);
  ++count_;
  if (++in_block_ == block_size_) {
    const double inv = 1.0 / static_cast<double>(block_size_);
    CorrelatorBin bin{current_, current_mean_ * inv};
    for (double& x : bin.s) x *= inv;
    blocks_.push_back(std::move(bin));
    std::fill(current_.begin(), current_.end(), 0.0);
    current_mean_ = 0.0;
    in_block_ = 0;
  }
}

CorrelatorGrid build_correlator(std::span<const CorrelatorAccumulator> chains, double mass,
                                std::size_t min_bins) {
  if (chains.empty()) throw InsufficientData("build_correlator: no chains");
  CorrelatorGrid g;
  g.spec = chains.front().spec_;
  g.mass = mass;
  const std::size_t block = chains.front().block_size_;
  std::size_t total_blocks = 0;
  for (const auto& c : chains) {
    if (!(c.spec_ == g.spec) || c.block_size_ != block) {
      throw InvalidParameter("build_correlator: chains disagree on lattice or block size");
    }
    total_blocks += c.blocks_.size();
    for (const auto* series : {&c.field_series_, &c.origin_series_}) {
      if (series->size() < 100) continue;
      try {
        g.tau_int = std::max(g.tau_int, autocorrelation(*series));
      } catch (const InsufficientData&) {
        // Constant series (e.g. a frozen chain) carry no autocorrelation information.
      }
    }
  }
  if (total_blocks < 2) throw InsufficientData("build_correlator: fewer than two complete blocks");

  const auto wanted = static_cast<std::size_t>(std::ceil(kBinTauFactor * g.tau_int / static_cast<double>(block)));
  const std::size_t allowed = std::max<std::size_t>(1, total_blocks / std::max<std::size_t>(min_bins, 2));
  std::size_t factor = std::max<std::size_t>(1, wanted);
  if (factor > allowed) {
    std::ostringstream os;
    os << "bins span " << allowed * block << " measurements, below " << kBinTauFactor << " tau_int ("
       << g.tau_int << ")";
    g.warnings.push_back(os.str());
    factor = allowed;
  }
  g.bin_length = factor * block;
  for (const auto& c : chains) {
    const std::size_t nb = c.blocks_.size() / factor;
    for (std::size_t b = 0; b < nb; ++b) {
      g.bins.push_back(average_bins(std::span(c.blocks_).subspan(b * factor, factor)));
    }
    g.n_samples += nb * factor * block;
  }
  if (g.bins.size() < 2) throw InsufficientData("build_correlator: fewer than two bins");
  recompute(g);
  return g;
}

CorrelatorGrid schwinger_two_point(std::span<const FieldConfig> samples) {
  if (samples.empty()) throw InsufficientData("schwinger_two_point: no samples");
  return schwinger_two_point(samples, LatticeSpec{samples.front().n_t, samples.front().n_x, 1.0, 1.0}, 0.0);
}

CorrelatorGrid schwinger_two_point(std::span<const FieldConfig> samples, const LatticeSpec& spec,
                                   double mass) {
  if (samples.size() < 100) throw InsufficientData("schwinger_two_point: need at least 100 samples");
  std::vector<CorrelatorAccumulator> acc;
  acc.emplace_back(spec, 1);
  for (const auto& c : samples) acc.front().add(c);
  return build_correlator(acc, mass);
}

CorrelatorGrid symmetrize(const CorrelatorGrid& grid) {
  CorrelatorGrid g = grid;
  g.symmetrized = true;
  if (g.bins.size() >= 2) {
    recompute(g);
  } else {
    g.s = symmetrize_vector(g.spec, grid.s);
    g.err = symmetrize_vector(g.spec, grid.err);
  }
  return g;
}

CorrelatorGrid connected(const CorrelatorGrid& grid) {
  CorrelatorGrid g = grid;
  g.connected = true;
  recompute(g);
  return g;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

double bonferroni_threshold(std::size_t comparisons, double sigma) {
  const double alpha = std::erfc(sigma / std::sqrt(2.0));
  return normal_upper_quantile(alpha / (2.0 * static_cast<double>(std::max<std::size_t>(1, comparisons))));
}

CheckReport kms_periodicity_check(const CorrelatorGrid& raw) {
  if (raw.symmetrized) throw InvalidParameter("kms_periodicity_check: needs the raw (unsymmetrized) grid");
  const auto& spec = raw.spec;
  CheckReport r = make_report("kms_periodicity");
  std::vector<std::pair<int, int>> pairs;
  for (int t = 1; 2 * t < spec.n_t; ++t) {
    for (int x = 0; x < spec.n_x; ++x) pairs.emplace_back(t, x);
  }
  if (pairs.empty()) {
    r.message = "lattice too short in time for a reflection comparison";
    return r;
  }
  std::vector<double> diff(pairs.size());
  std::vector<double> err(pairs.size());
  if (raw.bins.size() >= 2) {
    const auto base = grid_transform(raw);
    const auto jk = jackknife(raw.bins, [&](const CorrelatorBin& b) {
      const auto s = base(b);
      std::vector<double> d(pairs.size());
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [t, x] = pairs[i];
        d[i] = s[spec.index(t, x)] - s[spec.index(spec.n_t - t, x)];
      }
      return d;
    });
    diff = jk.value;
    err = jk.error;
  } else {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto [t, x] = pairs[i];
      diff[i] = raw.at(t, x) - raw.at(spec.n_t - t, x);
      err[i] = std::hypot(raw.error_at(t, x), raw.error_at(spec.n_t - t, x));
    }
  }
  double worst = 0.0;
  std::size_t counted = 0;
  int worst_t = 0;
  int worst_x = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    double z = 0.0;
    if (err[i] > 0.0) {
      z = std::abs(diff[i]) / err[i];
      ++counted;
    } else if (diff[i] != 0.0) {
      z = std::numeric_limits<double>::infinity();
    }
    if (z > worst) {
      worst = z;
      worst_t = pairs[i].first;
      worst_x = pairs[i].second;
    }
  }
  r.statistic = worst;
  r.threshold = bonferroni_threshold(counted);
  r.verdict = worst < r.threshold ? Verdict::Pass : Verdict::Fail;
  r.values = {{"max_z", worst},
              {"comparisons", static_cast<double>(counted)},
              {"worst_dtau", worst_t},
              {"worst_dx", worst_x}};
  r.message = "max standardized |S(tau,x) - S(beta-tau,x)| vs Bonferroni-corrected 3 sigma";
  return r;
}

double min_eigenvalue(std::span<const double> matrix, int n) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(matrix.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CheckReport os_positivity_check(const CorrelatorGrid& grid, std::uint64_t seed, int n_bootstrap) {
  CheckReport r = make_report("os_positivity");
  const int k = grid.spec.n_t / 4;
  if (k < 1) {
    r.message = "lattice too short in time (need n_t >= 4)";
    return r;
  }
  const auto build = [&](const std::vector<double>& s) {
    std::vector<double> m(static_cast<std::size_t>(k * k));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) m[static_cast<std::size_t>(i * k + j)] = s[grid.spec.index(i + j + 2, 0)];
    }
    return m;
  };
  const auto mat = build(grid.s);
  const double lmin = min_eigenvalue(mat, k);
  double norm = 0.0;
  for (double v : mat) norm = std::max(norm, std::abs(v));
  const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * norm * k;

  double sigma = 0.0;
  if (grid.bins.size() >= 2) {
    const auto f = grid_transform(grid);
    Rng rng(seed, kAuxStreamBase + 1);
    std::vector<double> boot;
    std::vector<CorrelatorBin> sample(grid.bins.size());
    for (int b = 0; b < n_bootstrap; ++b) {
      for (auto& s : sample) s = grid.bins[rng.next_u64() % grid.bins.size()];
      boot.push_back(min_eigenvalue(build(f(average_bins(sample))), k));
    }
    double mu = 0.0;
    for (double v : boot) mu += v / boot.size();
    double ss = 0.0;
    for (double v : boot) ss += (v - mu) * (v - mu);
    sigma = std::sqrt(ss / static_cast<double>(boot.size() - 1));
  }
  r.statistic = lmin;
  r.threshold = -kSigma * sigma - roundoff;
  r.verdict = lmin > r.threshold ? Verdict::Pass : Verdict::Fail;
  r.values = {{"min_eigenvalue", lmin}, {"bootstrap_error", sigma}, {"matrix_size", k}};
  r.message = "M_ij = S(tau_i + tau_j, 0) must be positive semidefinite";
  return r;
}

CheckReport clustering_check(const CorrelatorGrid& grid) {
  CheckReport r = make_report("clustering");
  const CorrelatorGrid g = grid.connected || grid.bins.size() < 2 ? grid : connected(grid);
  const int lo = std::max(1, grid.spec.n_x / 8);
  const int hi = grid.spec.n_x / 4;
  if (hi - lo < 1) {
    r.message = "spatial extent too small for the [L/8, L/4] window";
    return r;
  }
  for (int x = lo; x <= hi; ++x) {
    const double c = g.at(0, x);
    if (!(c > 0.0) || c < 2.0 * g.error_at(0, x)) {
      r.verdict = Verdict::Inconclusive;
      r.message = "connected correlator not resolved above noise in the fit window";
      r.values = {{"x_noisy", x}};
      return r;
    }
  }
  std::vector<double> wts;
  for (int x = lo; x <= hi; ++x) {
    const double rel = g.error_at(0, x) / g.at(0, x);
    wts.push_back(rel > 0.0 ? 1.0 / (rel * rel) : 1.0);
  }
  const auto fit = [&](const std::vector<double>& s) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int x = lo; x <= hi; ++x) {
      const double w = wts[static_cast<std::size_t>(x - lo)];
      const double y = std::log(std::abs(s[grid.spec.index(0, x)]));
      const double xp = x * grid.spec.a_x;
      sw += w;
      sx += w * xp;
      sy += w * y;
      sxx += w * xp * xp;
      sxy += w * xp * y;
    }
    return -(sw * sxy - sx * sy) / (sw * sxx - sx * sx);
  };
  const double rate = fit(g.s);
  double err = 0.0;
  if (g.bins.size() >= 2) {
    const auto f = grid_transform(g);
    err = jackknife(g.bins, [&](const CorrelatorBin& b) { return std::vector<double>{fit(f(b))}; }).error[0];
  }
  r.statistic = rate;
  r.threshold = kSigma * err;
  r.verdict = rate > r.threshold && rate > 0.0 ? Verdict::Pass : Verdict::Fail;
  r.values = {{"decay_rate", rate}, {"decay_rate_error", err}, {"x_lo", lo * grid.spec.a_x}, {"x_hi", hi * grid.spec.a_x}};
  r.message = "log-linear fit of |S_conn(0,x)| on [L/8, L/4]";
  return r;
}

CheckReport nelson_symmetry_check(const CorrelatorGrid& a, const CorrelatorGrid& b) {
  if (!(a.spec.transposed() == b.spec)) {
    throw InvalidParameter("nelson_symmetry_check: second run must use the transposed lattice");
  }
  CheckReport r = make_report("nelson_symmetry");
  const bool sym = a.symmetrized && b.symmetrized;
  const int t_max = sym ? a.spec.n_t / 2 : a.spec.n_t - 1;
  const int x_max = sym ? a.spec.n_x / 2 : a.spec.n_x - 1;
  double worst = 0.0;
  std::size_t counted = 0;
  for (int t = 0; t <= t_max; ++t) {
    for (int x = 0; x <= x_max; ++x) {
      const double d = a.at(t, x) - b.at(x, t);
      const double e = std::hypot(a.error_at(t, x), b.error_at(x, t));
      double z = 0.0;
      if (e > 0.0) {
        z = std::abs(d) / e;
        ++counted;
      } else if (d != 0.0) {
        z = std::numeric_limits<double>::infinity();
      }
      worst = std::max(worst, z);
    }
  }
  r.statistic = worst;
  r.threshold = bonferroni_threshold(counted);
  r.verdict = worst < r.threshold ? Verdict::Pass : Verdict::Fail;
  r.values = {{"max_z", worst}, {"comparisons", static_cast<double>(counted)}};
  r.message = "S_a(tau, x) vs S_b(x, tau) on the transposed lattice";
  return r;
}

DecayFit zero_momentum_decay(const CorrelatorGrid& grid, int x_lo, int x_hi) {
  if (x_lo < 0 || x_hi <= x_lo || x_hi >= grid.spec.n_x / 2 + 1) {
    throw InvalidParameter("zero_momentum_decay: bad window");
  }
  const CorrelatorGrid g = grid.connected || grid.bins.size() < 2 ? grid : connected(grid);
  const auto rate_of = [&](const std::vector<double>& s) {
    std::vector<double> prof(static_cast<std::size_t>(grid.spec.n_x), 0.0);
    for (int t = 0; t < grid.spec.n_t; ++t) {
      for (int x = 0; x < grid.spec.n_x; ++x) prof[static_cast<std::size_t>(x)] += s[grid.spec.index(t, x)];
    }
    double sum = 0.0;
    int n = 0;
    for (int x = x_lo; x < x_hi; ++x) {
      const double e = cosh_mass(prof[static_cast<std::size_t>(x)], prof[static_cast<std::size_t>(x + 1)], x,
                                 grid.spec.n_x);
      if (std::isfinite(e)) {
        sum += e;
        ++n;
      }
    }
    return n > 0 ? sum / n / grid.spec.a_x : std::numeric_limits<double>::quiet_NaN();
  };
  DecayFit fit{rate_of(g.s), 0.0};
  if (g.bins.size() >= 2) {
    const auto f = grid_transform(g);
    fit.error = jackknife(g.bins, [&](const CorrelatorBin& b) { return std::vector<double>{rate_of(f(b))}; }).error[0];
  }
  return fit;
}

CheckReport covariance_match_check(const CorrelatorGrid& grid, const LatticeCovariance& exact,
                                   std::span<const std::pair<int, int>> separations, double sigma) {
  if (!(grid.spec == exact.spec)) throw InvalidParameter("covariance_match_check: lattices differ");
  if (separations.empty()) throw InvalidParameter("covariance_match_check: no separations");
  CheckReport r = make_report("exact_covariance");
  double worst = 0.0;
  for (const auto& [t, x] : separations) {
    const double d = grid.at(t, x) - exact(t, x);
    const double e = grid.error_at(t, x);
    const double z = e > 0.0 ? std::abs(d) / e : (d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    worst = std::max(worst, z);
    r.values.emplace_back("z(" + std::to_string(t) + "," + std::to_string(x) + ")", z);
  }
  r.statistic = worst;
  r.threshold = sigma;
  r.verdict = worst <= sigma ? Verdict::Pass : Verdict::Fail;
  r.message = "measured two-point function vs exact lattice covariance";
  return r;
}

std::string correlator_csv(const CorrelatorGrid& grid) {
  std::ostringstream os;
  os << "dtau,dx,S,err\n";
  for (int t = 0; t < grid.spec.n_t; ++t) {
    for (int x = 0; x < grid.spec.n_x; ++x) {
      os << t << ',' << x << ',' << format_double(grid.at(t, x)) << ',' << format_double(grid.error_at(t, x))
         << '\n';
    }
  }
  return os.str();
}

CorrelatorGrid read_correlator_csv(const std::string& text, const LatticeSpec& spec) {
  spec.validate();
  CorrelatorGrid g;
  g.spec = spec;
  g.s.assign(spec.volume(), std::numeric_limits<double>::quiet_NaN());
  g.err.assign(spec.volume(), std::numeric_limits<double>::quiet_NaN());
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "dtau,dx,S,err") throw FormatError("correlator csv: bad header");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int t = 0;
    int x = 0;
    double v = 0.0;
    double e = 0.0;
    char c1 = 0;
    char c2 = 0;
    char c3 = 0;
    if (!(ls >> t >> c1 >> x >> c2 >> v >> c3 >> e) || c1 != ',' || c2 != ',' || c3 != ',') {
      throw FormatError("correlator csv: malformed row '" + line + "'");
    }
    if (t < 0 || t >= spec.n_t || x < 0 || x >= spec.n_x) throw FormatError("correlator csv: row outside lattice");
    g.s[spec.index(t, x)] = v;
    g.err[spec.index(t, x)] = e;
    ++rows;
  }
  if (rows != spec.volume()) throw FormatError("correlator csv: expected one row per lattice separation");
  g.symmetrized = true;
  return g;
}

}  // namespace tcyl
