#include "tcyl/spectral.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tcyl/errors.hpp"
#include "tcyl/quadrature.hpp"

namespace tcyl {

namespace {

using std::numbers::pi;

// Momentum cutoff factor: the dropped tail is below e^{-kTailExponent} of the envelope.
constexpr double kTailExponent = 40.0;
// Above this many half-periods of oscillation, switch to the double-exponential Fourier rule.
constexpr double kMaxPanels = 4000.0;
// |z| from which the asymptotic expansion of K0 is accurate to double precision.
constexpr double kBesselAsymptotic = 17.0;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite");
  }
}

// int_0^upper f(k) cos(omega k) dk where f decays at least like e^{-rate k}.
double cosine_integral(const quad::RealFn& f, double omega, double rate) {
  const double upper = kTailExponent / rate;
  if (omega == 0.0) {
    return quad::adaptive(f, 0.0, upper);
  }
  if (upper * std::abs(omega) / pi <= kMaxPanels) {
    const double half = pi / std::abs(omega);
    return quad::panels([&](double k) { return f(k) * std::cos(omega * k); }, upper, half, 1e-13,
                        0.5 * half);
  }
  return quad::fourier_cos(f, omega);
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidParameter("polynomial coefficients must be finite");
  }
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

Polynomial Polynomial::quartic(double lambda) { return Polynomial({0.0, 0.0, 0.0, 0.0, lambda}); }

bool Polynomial::is_even() const {
  for (std::size_t j = 1; j < coeffs_.size(); j += 2) {
    if (coeffs_[j] != 0.0) return false;
  }
  return true;
}

double Polynomial::operator()(double phi) const {
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * phi + *it;
  return v;
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t j = 0; j < coeffs_.size(); ++j) os << (j ? ", " : "") << coeffs_[j];
  os << ']';
  return os.str();
}

void ModelParams::validate() const {
  require_positive(mass, "mass");
  require_positive(beta, "beta");
  require_positive(circumference, "circumference");
  if (!poly.is_zero()) {
    if (poly.degree() < 2 || poly.degree() % 2 != 0) {
      throw InvalidParameter("interaction polynomial must have even degree >= 2");
    }
    if (!(poly.leading() > 0.0)) {
      throw InvalidParameter("interaction polynomial must have a positive leading coefficient");
    }
  }
}

double dispersion(double k, double m) {
  require_positive(m, "mass");
  return std::hypot(k, m);
}

double bose_occupation(double nu, double beta) {
  require_positive(nu, "nu");
  require_positive(beta, "beta");
  const double x = beta * nu;
  if (!(x > 0.0)) throw InvalidParameter("beta * nu must be positive");
  // expm1 overflows to +inf for x > ~709, giving exactly 0.
  return 1.0 / std::expm1(x);
}

double thermal_covariance_kernel(double k, const ModelParams& params) {
  params.validate();
  const double nu = dispersion(k, params.mass);
  return 1.0 / (2.0 * nu * std::tanh(0.5 * params.beta * nu));
}

double matsubara_covariance(double k, double tau, const ModelParams& params, std::int64_t n_cut) {
  params.validate();
  if (!(tau >= 0.0 && tau < params.beta)) {
    throw DomainError("matsubara_covariance: tau must lie in [0, beta)");
  }
  if (n_cut < 0) throw InvalidParameter("matsubara_covariance: n_cut must be non-negative");
  const double nu = dispersion(k, params.mass);
  const double nu2 = nu * nu;
  const double w = 2.0 * pi / params.beta;
  // Smallest terms first.
  double tail = 0.0;
  for (std::int64_t n = n_cut; n >= 1; --n) {
    const double wn = w * static_cast<double>(n);
    tail += std::cos(wn * tau) / (wn * wn + nu2);
  }
  return (1.0 / nu2 + 2.0 * tail) / params.beta;
}

double free_euclidean_propagator(double tau, double x, const ModelParams& params) {
  params.validate();
  const double beta = params.beta;
  if (!(tau >= 0.0 && tau <= beta)) {
    throw DomainError("free_euclidean_propagator: tau must lie in [0, beta]");
  }
  const double tp = std::min(tau, beta - tau);
  if (tp == 0.0 && x == 0.0) {
    throw SingularityError("free_euclidean_propagator: coincident point (log divergence)");
  }
  const double m = params.mass;
  const auto amplitude = [=](double k) {
    const double nu = std::hypot(k, m);
    return (std::exp(-tp * nu) + std::exp(-(beta - tp) * nu)) /
           (2.0 * pi * nu * -std::expm1(-beta * nu));
  };
  if (tp == 0.0) {
    return quad::fourier_cos(amplitude, x);
  }
  return cosine_integral(amplitude, x, tp);
}

std::complex<double> free_wightman(std::complex<double> t, double x, const ModelParams& params) {
  params.validate();
  const double beta = params.beta;
  double s = -t.imag();
  if (!(s >= 0.0 && s < beta)) {
    throw DomainError("free_wightman: Im t must lie in (-beta, 0]");
  }
  if (s == 0.0) s = kWightmanBoundaryEpsilon * beta;
  const double tr = t.real();
  const double m = params.mass;
  const double rate = std::min(s, beta - s);

  // W = (1/pi) int_0^inf dp cos(px) [(1+rho) e^{-i nu t} + rho e^{i nu t}] / (2 nu)
  // with rho e^{nu s} rewritten as (1+rho) e^{-nu (beta - s)}.
  const auto one_plus_rho = [=](double nu) { return 1.0 / (2.0 * pi * nu * -std::expm1(-beta * nu)); };
  const auto even = [=](double p) {
    const double nu = std::hypot(p, m);
    return one_plus_rho(nu) * (std::exp(-nu * s) + std::exp(-nu * (beta - s)));
  };

  if (tr == 0.0) {
    return {cosine_integral(even, x, rate), 0.0};
  }

  // Split off the two vacuum pieces carrying the slow e^{-nu s} and
  // e^{-nu (beta - s)} decay; the remainder is damped by rho(nu) ~ e^{-beta nu}.
  const auto vacuum = [&](std::complex<double> z) {
    return bessel_k0(m * std::sqrt(std::complex<double>(x * x) - z * z)) / (2.0 * pi);
  };
  const std::complex<double> head = vacuum({tr, -s}) + vacuum({-tr, -(beta - s)});

  const auto rho = [=](double nu) { return 1.0 / (2.0 * pi * nu * std::expm1(beta * nu)); };
  const auto rest_even = [=](double p) {
    const double nu = std::hypot(p, m);
    return rho(nu) * (std::exp(-nu * s) + std::exp(-nu * (beta - s))) * std::cos(nu * tr);
  };
  const auto rest_odd = [=](double p) {
    const double nu = std::hypot(p, m);
    return rho(nu) * (std::exp(-nu * (beta - s)) - std::exp(-nu * s)) * std::sin(nu * tr);
  };
  const double upper = kTailExponent / beta;
  const double panel = pi / (std::abs(x) + std::abs(tr));
  const double re = quad::panels([&](double p) { return rest_even(p) * std::cos(p * x); }, upper, panel);
  const double im = quad::panels([&](double p) { return rest_odd(p) * std::cos(p * x); }, upper, panel);
  return head + std::complex<double>(re, im);
}

std::complex<double> bessel_k0(std::complex<double> z) {
  if (z == 0.0 || z.real() < 0.0 || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("bessel_k0: argument must be finite, non-zero, with Re z >= 0");
  }
  if (std::abs(z) >= kBesselAsymptotic) {
    // K0(z) ~ sqrt(pi / 2z) e^{-z} sum_k (-1)^k ((2k-1)!!)^2 / (k! (8z)^k)
    std::complex<double> term = 1.0;
    std::complex<double> sum = 1.0;
    for (int k = 1; k < 60; ++k) {
      const double c = (2.0 * k - 1.0) * (2.0 * k - 1.0);
      const std::complex<double> next = -term * c / (static_cast<double>(k) * 8.0 * z);
      if (std::abs(next) >= std::abs(term)) break;
      term = next;
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(pi / (2.0 * z)) * std::exp(-z) * sum;
  }
  // Ascending series K0 = -(log(z/2) + gamma) I0(z) + sum_k H_k (z^2/4)^k / (k!)^2,
  // summed in extended precision to absorb its cancellation.
  using Complex = boost::multiprecision::cpp_complex_50;
  using Real = boost::multiprecision::cpp_bin_float_50;
  const Complex zz(z.real(), z.imag());
  const Complex w = zz * zz / 4;
  Complex term = 1;
  Complex i0 = 1;
  Complex tail = 0;
  Real harmonic = 0;
  for (int k = 1; k < 200; ++k) {
    term *= w / (k * k);
    harmonic += Real(1) / k;
    i0 += term;
    tail += term * harmonic;
    if (k > 2 && abs(term) * (1 + harmonic) < Real(1e-45)) break;
  }
  const Complex k0 = -(log(zz / 2) + boost::math::constants::euler<Real>()) * i0 + tail;
  return {static_cast<double>(k0.real()), static_cast<double>(k0.imag())};
}

double thermal_covariance_form(const std::function<std::complex<double>(double)>& h_hat,
                               const ModelParams& params) {
  params.validate();
  const double m = params.mass;
  const double beta = params.beta;
  const auto integrand = [&](double k) {
    const double nu = std::hypot(k, m);
    return std::norm(h_hat(k)) / (2.0 * nu * std::tanh(0.5 * beta * nu)) / (2.0 * pi);
  };
  // k f(k) must vanish at infinity for the form to be finite.
  const double far1 = 1e6 * m;
  const double far2 = 1e8 * m;
  const double tail1 = far1 * (integrand(far1) + integrand(-far1));
  const double tail2 = far2 * (integrand(far2) + integrand(-far2));
  if (!std::isfinite(tail1) || !std::isfinite(tail2) || (tail2 > 1e-12 && tail2 >= 0.5 * tail1)) {
    throw IntegrationFailure("h_hat is not square-integrable against the thermal kernel");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  return quad::adaptive(integrand, -inf, 0.0) + quad::adaptive(integrand, 0.0, inf);
}

double free_kms_expectation(const std::function<std::complex<double>(double)>& h_hat,
                            const ModelParams& params) {
  return std::exp(-0.25 * thermal_covariance_form(h_hat, params));
}

double free_kms_expectation(std::span<const double> k, std::span<const std::complex<double>> h_hat,
                            const ModelParams& params) {
  params.validate();
  if (k.size() != h_hat.size()) throw DimensionError("free_kms_expectation: grid size mismatch");
  if (k.size() < 2) throw InvalidParameter("free_kms_expectation: need at least two grid points");
  CompensatedSum form;
  double prev = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i > 0 && !(k[i] > k[i - 1])) {
      throw InvalidParameter("free_kms_expectation: momentum grid must be strictly increasing");
    }
    const double v = std::norm(h_hat[i]) * thermal_covariance_kernel(k[i], params) / (2.0 * pi);
    if (!std::isfinite(v)) throw IntegrationFailure("free_kms_expectation: non-finite integrand");
    if (i > 0) form += 0.5 * (v + prev) * (k[i] - k[i - 1]);
    prev = v;
  }
  const double c0 = form.value();
  if (!std::isfinite(c0)) throw IntegrationFailure("free_kms_expectation: non-finite integral");
  return std::exp(-0.25 * c0);
}

}  // namespace tcyl
