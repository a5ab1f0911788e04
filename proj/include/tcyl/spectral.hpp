#pragma once

// Closed-form kernels of the free thermal scalar field in 1+1 dimensions.
//
// Conventions: the field lives on the Euclidean cylinder S_beta x R (time is
// periodic with period beta, space is the real line).  Momentum integrals run
// over the whole line with measure dk / 2pi.  All functions are pure.

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace tcyl {

/// Ordinary polynomial P(phi) = sum_j coeffs[j] phi^j.
///
/// The zero polynomial is admissible and denotes the free theory.  Any other
/// polynomial must have even degree >= 2 and a positive leading coefficient so
/// that it is bounded from below.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  /// Free theory.
  static Polynomial zero() { return Polynomial{}; }
  /// lambda * phi^4.
  static Polynomial quartic(double lambda);

  const std::vector<double>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
  bool is_even() const;

  double operator()(double phi) const;

  std::string to_string() const;

 private:
  std::vector<double> coeffs_;  // trailing zeros stripped
};

/// Physical inputs of a run.  `circumference` is the spatial period L of the
/// torus used by the lattice modules; continuum kernels use infinite volume.
struct ModelParams {
  double mass = 1.0;
  double beta = 1.0;
  Polynomial poly;
  double circumference = 1.0;

  /// Throws InvalidParameter unless every invariant holds.
  void validate() const;
};

/// sqrt(k^2 + m^2).
double dispersion(double k, double m);

/// 1 / (exp(beta nu) - 1).  Returns 0 (not NaN) once the exponential overflows.
double bose_occupation(double nu, double beta);

/// Momentum-space kernel of the thermal covariance on the line,
/// (1 + e^{-beta nu}) / (2 nu (1 - e^{-beta nu})) = coth(beta nu / 2) / (2 nu).
double thermal_covariance_kernel(double k, const ModelParams& params);

/// Truncated Matsubara sum (1/beta) sum_{|n| <= n_cut} cos(omega_n tau) / (omega_n^2 + nu^2)
/// with omega_n = 2 pi n / beta.  Requires 0 <= tau < beta.
double matsubara_covariance(double k, double tau, const ModelParams& params, std::int64_t n_cut);

/// Free Euclidean two-point function S0(tau, x) on S_beta x R,
///   int dk/2pi e^{ikx} (e^{-tau nu} + e^{-(beta - tau) nu}) / (2 nu (1 - e^{-beta nu})),
/// for 0 <= tau <= beta.  Throws SingularityError at the coincident point.
double free_euclidean_propagator(double tau, double x, const ModelParams& params);

/// Imaginary-time offset (in units of beta) used for real-time boundary values.
inline constexpr double kWightmanBoundaryEpsilon = 1e-6;

/// Free thermal Wightman function W0(t, x) for complex t with -beta < Im t <= 0.
/// Real t is evaluated at Im t = -kWightmanBoundaryEpsilon * beta.
std::complex<double> free_wightman(std::complex<double> t, double x, const ModelParams& params);

/// Modified Bessel function K0 on the closed right half plane (principal branch).
/// Throws DomainError at z = 0 or for Re z < 0.
std::complex<double> bessel_k0(std::complex<double> z);

/// Thermal covariance form C0(h, h) = int dk/2pi |h(k)|^2 coth(beta nu/2) / (2 nu)
/// for a momentum-space test function given as a callable.
double thermal_covariance_form(const std::function<std::complex<double>(double)>& h_hat,
                               const ModelParams& params);

/// Expectation of the Weyl operator W(h) in the free KMS state,
///   exp(-1/4 (h, (1 + 2 rho) h)_h),  (f, g)_h = int dk/2pi conj(f) (2 nu)^{-1} g.
/// Equivalently exp(-C0(h, h) / 4).
double free_kms_expectation(const std::function<std::complex<double>(double)>& h_hat,
                            const ModelParams& params);

/// Same for a tabulated h_hat on a strictly increasing momentum grid (trapezoidal rule).
/// The grid should cover the support of h_hat; the integrand outside it is taken as zero.
double free_kms_expectation(std::span<const double> k, std::span<const std::complex<double>> h_hat,
                            const ModelParams& params);

}  // namespace tcyl
