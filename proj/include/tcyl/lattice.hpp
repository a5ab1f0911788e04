#pragma once

// Periodic space-time lattice and the exact lattice Gaussian free field.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tcyl/rng.hpp"
#include "tcyl/spectral.hpp"

namespace tcyl {

/// N_t x N_x periodic grid.  Temporal extent n_t * a_t is the inverse
/// temperature, spatial extent n_x * a_x the circumference of the spatial circle.
///
/// A direction with a single site carries no gradient term; that is only
/// used for single-site checks.
struct LatticeSpec {
  int n_t = 2;
  int n_x = 2;
  double a_t = 1.0;
  double a_x = 1.0;

  /// Spacings chosen so that the grid covers beta x circumference exactly.
  static LatticeSpec for_model(const ModelParams& params, int n_t, int n_x);

  void validate() const;
  /// Also checks n_t a_t == beta and n_x a_x == L (relative 1e-12).
  void validate_against(const ModelParams& params) const;

  std::size_t volume() const { return static_cast<std::size_t>(n_t) * static_cast<std::size_t>(n_x); }
  double beta() const { return n_t * a_t; }
  double length() const { return n_x * a_x; }
  double cell() const { return a_t * a_x; }

  /// Grid with the two directions exchanged.  Each direction keeps its
  /// spacing, so the exchange is a symmetry of the action only when a_t == a_x.
  LatticeSpec transposed() const { return {n_x, n_t, a_t, a_x}; }

  std::size_t index(int t, int x) const {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(n_x) + static_cast<std::size_t>(x);
  }

  bool operator==(const LatticeSpec&) const = default;
};

/// Real field on the grid, row-major over (t, x).
struct FieldConfig {
  int n_t = 0;
  int n_x = 0;
  std::vector<double> values;

  static FieldConfig zeros(const LatticeSpec& spec);
  static FieldConfig constant(const LatticeSpec& spec, double v);

  double& operator()(int t, int x) { return values[static_cast<std::size_t>(t) * n_x + x]; }
  double operator()(int t, int x) const { return values[static_cast<std::size_t>(t) * n_x + x]; }

  bool matches(const LatticeSpec& spec) const {
    return n_t == spec.n_t && n_x == spec.n_x && values.size() == spec.volume();
  }
  bool all_finite() const;
  FieldConfig transposed() const;
  double mean() const;

  bool operator==(const FieldConfig&) const = default;
};

/// Spectrum lambda(p, q) = (4/a_t^2) sin^2(pi p / n_t) + (4/a_x^2) sin^2(pi q / n_x) + m^2,
/// row-major over (p, q).
std::vector<double> lattice_eigenvalues(const LatticeSpec& spec, double m);

/// Exact lattice covariance, the inverse of a_t a_x (-Laplacian + m^2).
struct LatticeCovariance {
  LatticeSpec spec;
  double mass = 1.0;
  std::vector<double> eigenvalues;      // lambda(p, q)
  std::vector<double> position_kernel;  // C(dt, dx), row-major, dt in [0, n_t), dx in [0, n_x)

  /// Kernel at any integer separation (periodic).
  double operator()(int dt, int dx) const;
};

LatticeCovariance exact_lattice_covariance(const LatticeSpec& spec, double m);

/// One exact draw from the lattice Gaussian measure with covariance C_latt.
/// Identical (spec, m, seed) give bit-identical configurations.
FieldConfig sample_gff(const LatticeSpec& spec, double m, std::uint64_t seed);
FieldConfig sample_gff(const LatticeSpec& spec, double m, Rng& rng);

/// Coincident-point covariance c = C_latt(0, 0) used for Wick ordering.
double wick_constant(const LatticeSpec& spec, double m);

}  // namespace tcyl
