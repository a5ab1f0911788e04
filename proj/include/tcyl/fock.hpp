#pragma once

// Exact diagonalization of the interacting scalar field on a circle of
// circumference beta in a truncated bosonic Fock space.
//
// Modes n = -k_max..k_max carry frequencies b_n = sqrt((2 pi n / beta)^2 + m^2)
// and momenta 2 pi n / beta.  The field mode operator is
//   phi_n = (a_n + a_{-n}^dagger) / sqrt(2 b_n beta),
// so phi(g) = sum_n g_n phi_n for circle Fourier coefficients g_n.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcyl/report.hpp"
#include "tcyl/spectral.hpp"

namespace tcyl {

/// Largest basis accepted for dense eigensolves.
inline constexpr std::size_t kMaxFockStates = 5000;

using Occupation = std::vector<std::uint8_t>;

/// Truncated Fock basis.  States are occupation vectors (index i <-> mode
/// i - k_max) with total occupation <= n_max and, optionally, free energy
/// sum_n nu_n b_n <= energy_cutoff.
///
/// Enumeration order: by total occupation N ascending; within fixed N, reverse
/// lexicographic in (nu_{-k_max}, ..., nu_{k_max}) (largest nu_{-k_max} first).
/// The vacuum is always state 0.
class FockBasis {
 public:
  FockBasis(double beta, double mass, int k_max, int n_max,
            double energy_cutoff = std::numeric_limits<double>::infinity());

  double beta() const { return beta_; }
  double mass() const { return mass_; }
  int k_max() const { return k_max_; }
  int n_max() const { return n_max_; }
  int mode_count() const { return 2 * k_max_ + 1; }
  std::size_t size() const { return states_.size(); }

  const Occupation& state(std::size_t i) const { return states_[i]; }
  const std::vector<Occupation>& states() const { return states_; }
  std::optional<std::size_t> find(const Occupation& occ) const;

  /// b_n for mode n in [-k_max, k_max].
  double frequency(int n) const { return frequencies_[static_cast<std::size_t>(n + k_max_)]; }
  /// 2 pi n / beta.
  double momentum(int n) const;

 private:
  double beta_;
  double mass_;
  int k_max_;
  int n_max_;
  std::vector<Occupation> states_;
  std::vector<double> frequencies_;
  std::map<Occupation, std::size_t> index_;
};

struct OperatorMatrix {
  Eigen::MatrixXd matrix;
  bool hermitian = false;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// dGamma(b): diagonal sum_n nu_n b_n.
OperatorMatrix build_free_hamiltonian(const FockBasis& basis);

/// dGamma(D_t): diagonal sum_n nu_n 2 pi n / beta.
OperatorMatrix build_momentum(const FockBasis& basis);

/// a_n (creation = false) or a_n^dagger (creation = true).  Transitions
/// leaving the truncated basis are dropped.
OperatorMatrix build_ladder(const FockBasis& basis, int n, bool creation);

/// phi_n = (a_n + a_{-n}^dagger) / sqrt(2 b_n beta).
OperatorMatrix build_field_mode(const FockBasis& basis, int n);

/// int_0^beta :P(phi(t)): dt with normal ordering and momentum conservation.
/// Throws Unsupported for degree > 8 and InvalidParameter for odd degree.
OperatorMatrix build_interaction(const FockBasis& basis, const Polynomial& poly);

enum class EnergyShift { SubtractGround, None };

struct GroundState {
  double e_c = 0.0;       // lowest eigenvalue of the input matrix
  double energy0 = 0.0;   // ground energy after the shift (0 with SubtractGround)
  double gap = 0.0;       // E_1 - E_0
  Eigen::VectorXd vector;
  Eigen::VectorXd eigenvalues;  // ascending, after the shift
  std::vector<std::string> warnings;
};

/// Dense eigensolve.  Warns when the gap is below 10x the eigensolver tolerance.
GroundState ground_state(const OperatorMatrix& h, EnergyShift policy = EnergyShift::SubtractGround);

struct CircleModel {
  FockBasis basis;
  OperatorMatrix hamiltonian;  // H_C with E_C subtracted
  OperatorMatrix momentum;
  GroundState ground;
};

/// Builds H = dGamma(b) + int :P:, subtracts its ground energy, and returns it
/// with the momentum operator.  Uses params.mass, params.beta and params.poly.
CircleModel solve_circle(const ModelParams& params, int k_max, int n_max,
                         double energy_cutoff = std::numeric_limits<double>::infinity());

/// PASS iff min eig(H - P) and min eig(H + P) are both >= -tol.
CheckReport spectrum_condition_check(const OperatorMatrix& h, const OperatorMatrix& p, double tol);

/// Largest change of E_C and of the gap between n_max - 2 and n_max.
double truncation_drift(const ModelParams& params, int k_max, int n_max);

/// Simultaneous eigenbasis of H and a momentum operator diagonal in the Fock basis.
struct JointSpectrum {
  Eigen::VectorXd energies;
  Eigen::VectorXd momenta;
  Eigen::MatrixXd vectors;  // columns
};

/// Throws BasisError if ||[H, P]|| > 1e-10 or P is not diagonal.
JointSpectrum joint_eigenbasis(const OperatorMatrix& h, const OperatorMatrix& p);

/// phi(delta_k) Omega = sum_{|n| <= k} phi_n Omega (sharp Fourier cutoff).
Eigen::VectorXd smeared_field_state(const FockBasis& basis, const Eigen::VectorXd& omega, int k);

/// <psi| e^{-y H} e^{i t P} |psi> for psi = phi(delta_k) Omega.  Throws DomainError for y <= 0.
std::complex<double> circle_two_point(const JointSpectrum& js, const Eigen::VectorXd& psi, double t, double y);

/// Weight of psi on joint eigenvalues with |p| > E + tol relative to ||psi||^2;
/// PASS iff it is below 1e-10.
CheckReport joint_spectral_support_check(const JointSpectrum& js, const Eigen::VectorXd& psi,
                                         double tol = 1e-9);

}  // namespace tcyl
