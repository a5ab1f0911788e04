#include "tcyl/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tcyl/errors.hpp"
#include "tcyl/field_io.hpp"

namespace tcyl {

namespace {

constexpr std::size_t kBlocksPerChain = 500;
constexpr std::size_t kSamplesPerChain = 1000;
constexpr double kRoundoffAllowance = 1e-10;

}  // namespace

const std::vector<std::pair<int, int>>& covariance_separations() {
  static const std::vector<std::pair<int, int>> seps = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0},
                                                       {0, 2}, {2, 2}, {3, 1}, {1, 3}, {4, 4}};
  return seps;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<CheckReport> run_checks(const RunManifest& manifest, const CorrelatorGrid& raw) {
  std::vector<CheckReport> reports;
  const CorrelatorGrid sym = symmetrize(raw);
  for (const auto& check : manifest.checks) {
    if (check == "kms") {
      reports.push_back(kms_periodicity_check(raw));
    } else if (check == "os_positivity") {
      reports.push_back(os_positivity_check(sym, manifest.mc.seed));
    } else if (check == "clustering") {
      reports.push_back(clustering_check(sym));
    } else if (check == "exact_covariance") {
      if (!manifest.model.poly.is_zero()) {
        throw InvalidParameter("exact_covariance check applies to the free theory only");
      }
      const auto cov = exact_lattice_covariance(raw.spec, manifest.model.mass);
      reports.push_back(covariance_match_check(sym, cov, covariance_separations()));
    }
  }
  return reports;
}

SimulationResult run_simulation(const RunManifest& manifest, int threads) {
  SimulationResult r;
  r.manifest = manifest;
  const LatticeSpec spec = manifest.lattice();
  const auto n_meas = static_cast<std::size_t>(manifest.mc.n_sweeps / manifest.mc.meas_interval);
  if (n_meas < 2) throw InsufficientData("simulate: fewer than two measurements per chain");
  const std::size_t block = std::max<std::size_t>(1, n_meas / kBlocksPerChain);
  const std::size_t stride = manifest.sample_stride > 0
                                 ? static_cast<std::size_t>(manifest.sample_stride)
                                 : std::max<std::size_t>(1, (n_meas + kSamplesPerChain - 1) / kSamplesPerChain);

  const auto n_chains = static_cast<std::size_t>(manifest.mc.n_chains);
  std::vector<CorrelatorAccumulator> acc;
  acc.reserve(n_chains);
  for (std::size_t c = 0; c < n_chains; ++c) acc.emplace_back(spec, block);
  std::vector<std::vector<FieldConfig>> kept(n_chains);
  const MeasurementHook hook = [&](int chain, std::size_t idx, const FieldConfig& cfg) {
    const auto c = static_cast<std::size_t>(chain);
    acc[c].add(cfg);
    if (idx % stride == 0) kept[c].push_back(cfg);
  };
  r.chains = run_chains(manifest.model, spec, manifest.mc, default_observables(), threads, hook);
  for (auto& k : kept) {
    for (auto& cfg : k) r.samples.push_back(std::move(cfg));
  }
  for (const auto& c : r.chains) r.warnings.insert(r.warnings.end(), c.warnings.begin(), c.warnings.end());

  const auto& names = r.chains.front().names;
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<EstimatorResult> parts;
    for (const auto& c : r.chains) {
      if (c.estimates.size() == names.size()) parts.push_back(c.estimates[k]);
    }
    if (parts.size() == r.chains.size()) r.observables.push_back({names[k], merge_estimates(parts)});
  }

  r.raw = build_correlator(acc, manifest.model.mass);
  r.warnings.insert(r.warnings.end(), r.raw.warnings.begin(), r.raw.warnings.end());
  r.symmetric = symmetrize(r.raw);
  r.reports = run_checks(manifest, r.raw);
  return r;
}

void write_simulation(const SimulationResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "manifest.toml", r.manifest.to_text());
  write_file_atomic(dir / "samples.bin", encode_fields(r.samples));
  write_file_atomic(dir / "correlator.csv", correlator_csv(r.symmetric));
  std::ostringstream obs;
  obs << "observable,mean,std_error,tau_int,n_eff\n";
  for (const auto& o : r.observables) {
    obs << o.name << ',' << format_double(o.estimate.mean) << ',' << format_double(o.estimate.std_error) << ','
        << format_double(o.estimate.tau_int) << ',' << format_double(o.estimate.n_eff) << '\n';
  }
  write_file_atomic(dir / "observables.csv", obs.str());
  write_file_atomic(dir / "verdicts.json", verdicts_json(r.manifest.manifest_hash, r.manifest.mc.seed, r.reports));
  write_file_atomic(dir / "report.txt", report_text("thermal-cylinder simulate", r.manifest.manifest_hash,
                                                    r.reports, r.warnings));
}

CorrelateResult correlate_run(const std::filesystem::path& run_dir) {
  CorrelateResult r;
  r.manifest = load_manifest(run_dir / "manifest.toml");
  const auto samples = read_fields(run_dir / "samples.bin");
  r.raw = schwinger_two_point(samples, r.manifest.lattice(), r.manifest.model.mass);
  r.symmetric = symmetrize(r.raw);
  r.reports = run_checks(r.manifest, r.raw);
  return r;
}

CheckReport nelson_compare_runs(const std::filesystem::path& run_a, const std::filesystem::path& run_b) {
  const auto ma = load_manifest(run_a / "manifest.toml");
  const auto mb = load_manifest(run_b / "manifest.toml");
  const auto a = read_correlator_csv(read_text_file(run_a / "correlator.csv"), ma.lattice());
  const auto b = read_correlator_csv(read_text_file(run_b / "correlator.csv"), mb.lattice());
  return nelson_symmetry_check(a, b);
}

OracleResult run_oracle(const RunManifest& manifest) {
  const auto& o = manifest.oracle;
  OracleResult r;
  CircleModel model = solve_circle(manifest.model, o.k_max, o.n_max);
  r.basis_size = model.basis.size();
  r.e_c = model.ground.e_c;
  r.gap = model.ground.gap;
  r.warnings = model.ground.warnings;
  r.drift = kRoundoffAllowance;
  if (!manifest.model.poly.is_zero() && o.n_max >= 3) {
    r.drift = std::max(r.drift, truncation_drift(manifest.model, o.k_max, o.n_max));
  }
  OperatorMatrix p = model.momentum;
  p.matrix *= o.momentum_scale;
  r.reports.push_back(spectrum_condition_check(model.hamiltonian, p, r.drift));

  const JointSpectrum js = joint_eigenbasis(model.hamiltonian, p);
  const Eigen::VectorXd psi = smeared_field_state(model.basis, model.ground.vector, o.smearing);
  r.reports.push_back(joint_spectral_support_check(js, psi, r.drift));

  std::ostringstream csv;
  csv << "t,y,value\n";
  double worst_imag = 0.0;
  for (int i = 0; i < o.t_points; ++i) {
    const double t = manifest.model.beta * i / o.t_points;
    const auto w = circle_two_point(js, psi, t, o.y);
    worst_imag = std::max(worst_imag, std::abs(w.imag()));
    csv << format_double(t) << ',' << format_double(o.y) << ',' << format_double(w.real()) << '\n';
  }
  r.two_point_csv = csv.str();
  if (worst_imag > 1e-12) {
    r.warnings.push_back("two-point function has imaginary part " + format_double(worst_imag));
  }
  return r;
}

std::string oracle_report_text(const RunManifest& manifest, const OracleResult& r) {
  std::vector<std::string> notes = r.warnings;
  notes.insert(notes.begin(), {"basis_size = " + std::to_string(r.basis_size), "E_C = " + format_double(r.e_c),
                               "E_0 = 0 (after subtracting E_C)", "gap = " + format_double(r.gap),
                               "spectrum condition allowance = " + format_double(r.drift)});
  return report_text("thermal-cylinder oracle", manifest.manifest_hash, r.reports, notes);
}

}  // namespace tcyl
