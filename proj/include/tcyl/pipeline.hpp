#pragma once

// End-to-end simulation: sampling, correlator estimation, checks and the
// persisted artifacts of a run directory.

#include <filesystem>
#include <string>
#include <vector>

#include "tcyl/correlators.hpp"
#include "tcyl/fock.hpp"
#include "tcyl/manifest.hpp"
#include "tcyl/monte_carlo.hpp"

namespace tcyl {

struct NamedEstimate {
  std::string name;
  EstimatorResult estimate;
};

struct SimulationResult {
  RunManifest manifest;
  std::vector<ChainResult> chains;
  std::vector<FieldConfig> samples;  // kept measurements, chain-major
  CorrelatorGrid raw;
  CorrelatorGrid symmetric;
  std::vector<NamedEstimate> observables;  // pooled over chains
  std::vector<CheckReport> reports;
  std::vector<std::string> warnings;
};

/// Separations used by the exact_covariance check.
const std::vector<std::pair<int, int>>& covariance_separations();

/// Runs the checks enabled in the manifest on a raw correlator grid.
std::vector<CheckReport> run_checks(const RunManifest& manifest, const CorrelatorGrid& raw);

SimulationResult run_simulation(const RunManifest& manifest, int threads);

/// Writes manifest.toml, samples.bin, correlator.csv, observables.csv,
/// verdicts.json and report.txt (each atomically).
void write_simulation(const SimulationResult& result, const std::filesystem::path& dir);

/// Correlator and checks recomputed from a run directory's samples.bin.
struct CorrelateResult {
  RunManifest manifest;
  CorrelatorGrid raw;
  CorrelatorGrid symmetric;
  std::vector<CheckReport> reports;
};
CorrelateResult correlate_run(const std::filesystem::path& run_dir);

/// Loads manifest.toml and correlator.csv of two runs and compares them.
CheckReport nelson_compare_runs(const std::filesystem::path& run_a, const std::filesystem::path& run_b);

struct OracleResult {
  std::size_t basis_size = 0;
  double e_c = 0.0;
  double gap = 0.0;
  double drift = 0.0;  // tolerance used by the spectrum condition
  std::vector<CheckReport> reports;
  std::vector<std::string> warnings;
  std::string two_point_csv;  // t,y,value
};

/// Fock-space oracle driven by the [model] and [oracle] sections.
OracleResult run_oracle(const RunManifest& manifest);
std::string oracle_report_text(const RunManifest& manifest, const OracleResult& result);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace tcyl
