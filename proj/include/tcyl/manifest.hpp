#pragma once

// Run manifests: a flat sectioned text format (key = value under [model],
// [lattice], [mc], [checks], [oracle], [output]) with a SHA-256 digest over
// its canonical form.
//
// Randomness: every random draw of a run derives from mc.seed through the
// stream rule in rng.hpp, so equal manifests reproduce outputs bit for bit.

#include <filesystem>
#include <string>
#include <vector>

#include "tcyl/lattice.hpp"
#include "tcyl/monte_carlo.hpp"
#include "tcyl/report.hpp"
#include "tcyl/spectral.hpp"

namespace tcyl {

/// Checks understood by the simulate pipeline.
inline const std::vector<std::string> kKnownChecks = {"kms", "os_positivity", "clustering", "exact_covariance"};

struct OracleSettings {
  int k_max = 2;
  int n_max = 8;
  int smearing = 1;          // modes |n| <= smearing in phi(delta_k)
  double y = 1.0;            // Euclidean separation for the two-point table
  int t_points = 9;          // t grid over [0, beta)
  double momentum_scale = 1.0;  // != 1 only for negative controls
};

struct RunManifest {
  ModelParams model;
  int n_t = 16;
  int n_x = 16;
  MCConfig mc;
  std::vector<std::string> checks = {"kms", "os_positivity", "clustering"};
  OracleSettings oracle;
  std::string output_dir = "out";
  int sample_stride = 0;  // keep every k-th measurement in samples.bin; 0 = at most 1000 per chain
  std::string code_version = TCYL_VERSION;
  std::string manifest_hash;  // filled by finalize()

  LatticeSpec lattice() const { return LatticeSpec::for_model(model, n_t, n_x); }

  /// Validates every field and recomputes manifest_hash.
  void finalize();
  /// Hex SHA-256 of canonical_body().  The output directory is excluded.
  std::string compute_hash() const;
  /// Canonical serialization without the hash line.
  std::string canonical_body() const;
  /// Full serialization: canonical body plus output dir and hash line.
  std::string to_text() const;

 private:
  std::string serialize(bool include_dir) const;
};

/// Parses manifest text.  A stored manifest_hash that does not match the
/// content raises FormatError (the run must not proceed); a missing hash is
/// computed.  Unknown sections or keys raise FormatError.
RunManifest parse_manifest(const std::string& text);
RunManifest load_manifest(const std::filesystem::path& path);

std::string sha256_hex(const std::string& data);

/// Verdict summary as JSON (key order fixed, no timestamps).
std::string verdicts_json(const std::string& manifest_hash, std::uint64_t seed,
                          const std::vector<CheckReport>& reports);

/// Human-readable report.
std::string report_text(const std::string& title, const std::string& manifest_hash,
                        const std::vector<CheckReport>& reports, const std::vector<std::string>& notes);

bool all_pass(const std::vector<CheckReport>& reports);

}  // namespace tcyl
