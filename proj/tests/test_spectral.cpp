#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "tcyl/errors.hpp"
#include "tcyl/spectral.hpp"

using namespace tcyl;

namespace {

ModelParams params(double m, double beta) {
  ModelParams p;
  p.mass = m;
  p.beta = beta;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double image_sum(double tau, double x, double m, double beta, int j_max) {
  double s = 0.0;
  for (int j = -j_max; j <= j_max; ++j) s += boost::math::cyl_bessel_k(0, m * std::hypot(tau + j * beta, x));
  return s / (2.0 * std::numbers::pi);
}

}  // namespace

TEST_CASE("dispersion") {
  CHECK(dispersion(0.0, 1.0) == 1.0);
  CHECK(dispersion(3.0, 4.0) == 5.0);
  CHECK(dispersion(0.6, 0.8) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dispersion(-3.0, 4.0) == 5.0);
  CHECK_THROWS_AS(dispersion(1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(dispersion(1.0, -1.0), InvalidParameter);
}

TEST_CASE("bose occupation") {
  CHECK(bose_occupation(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bose_occupation(std::log(1.5), 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  const double exact = std::exp(-50.0) / (1.0 - std::exp(-50.0));
  CHECK(rel(bose_occupation(50.0, 1.0), exact) < 1e-12);
  CHECK(rel(bose_occupation(25.0, 2.0), exact) < 1e-12);
  const double huge = bose_occupation(1e4, 1.0);
  CHECK(huge == 0.0);
  CHECK_FALSE(std::isnan(huge));
  CHECK(bose_occupation(1.0, 1.0) > bose_occupation(2.0, 1.0));
  CHECK_THROWS_AS(bose_occupation(0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(bose_occupation(1.0, -1.0), InvalidParameter);
}

TEST_CASE("thermal covariance kernel") {
  SUBCASE("zero-temperature limit") {
    CHECK(rel(thermal_covariance_kernel(0.0, params(1.0, 1e4)), 0.5) < 1e-4);
  }
  SUBCASE("coth(1/2)/2 against a 50-digit evaluation") {
    using boost::multiprecision::cpp_dec_float_50;
    const cpp_dec_float_50 half("0.5");
    const cpp_dec_float_50 coth = cosh(half) / sinh(half);
    const double oracle = static_cast<double>(coth / 2);
    CHECK(std::abs(thermal_covariance_kernel(0.0, params(1.0, 1.0)) - oracle) < 1e-15);
    CHECK(oracle == doctest::Approx(1.0819767).epsilon(1e-7));
  }
  SUBCASE("(1 + 2 rho) / (2 nu) identity") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> dk(-20.0, 20.0);
    const auto p = params(0.7, 1.3);
    for (int i = 0; i < 100; ++i) {
      const double k = dk(gen);
      const double nu = dispersion(k, p.mass);
      const double alt = (1.0 + 2.0 * bose_occupation(nu, p.beta)) / (2.0 * nu);
      CHECK(rel(thermal_covariance_kernel(k, p), alt) < 1e-14);
      CHECK(thermal_covariance_kernel(k, p) >= 1.0 / (2.0 * nu));
    }
  }
}

TEST_CASE("Matsubara sum") {
  const auto p = params(1.0, 1.0);
  CHECK(matsubara_covariance(0.0, 0.0, p, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(matsubara_covariance(0.0, 0.0, p, 1000000) - thermal_covariance_kernel(0.0, p)) < 1e-6);

  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double tau = 0.01 + 0.98 * u(gen);
    const double a = matsubara_covariance(0.4, tau, p, 5000);
    const double b = matsubara_covariance(0.4, 1.0 - tau, p, 5000);
    CHECK(std::abs(a - b) < 1e-13 * std::abs(a) + 1e-15);
  }

  double prev = 0.0;
  for (std::int64_t n : {0, 1, 10, 100, 1000, 10000}) {
    const double v = matsubara_covariance(0.3, 0.0, p, n);
    CHECK(v > prev);
    CHECK(v < thermal_covariance_kernel(0.3, p));
    prev = v;
  }
  CHECK_THROWS_AS(matsubara_covariance(0.0, 1.0, p, 10), DomainError);
  CHECK_THROWS_AS(matsubara_covariance(0.0, 0.0, p, -1), InvalidParameter);
}

TEST_CASE("free Euclidean propagator") {
  const auto p = params(1.0, 2.0);
  SUBCASE("reflection and x symmetry") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      const double tau = 0.05 + 1.9 * u(gen);
      const double x = 3.0 * u(gen) - 1.5;
      const double s = free_euclidean_propagator(tau, x, p);
      CHECK(s > 0.0);
      CHECK(rel(free_euclidean_propagator(2.0 - tau, x, p), s) < 1e-12);
      CHECK(rel(free_euclidean_propagator(tau, -x, p), s) < 1e-12);
    }
  }
  SUBCASE("Bessel image sum") {
    CHECK(std::abs(free_euclidean_propagator(1.0, 0.0, p) - image_sum(1.0, 0.0, 1.0, 2.0, 50)) < 1e-10);
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      const double tau = 0.1 + 1.8 * u(gen);
      const double x = 4.0 * u(gen);
      CHECK(std::abs(free_euclidean_propagator(tau, x, p) - image_sum(tau, x, 1.0, 2.0, 50)) < 1e-10);
    }
  }
  SUBCASE("vacuum limit") {
    const auto cold = params(1.0, 50.0);
    for (double theta : {0.0, 0.4, 1.1, 1.5707963267948966}) {
      const double tau = std::cos(theta);
      const double x = std::sin(theta);
      const double vac = boost::math::cyl_bessel_k(0, 1.0) / (2.0 * std::numbers::pi);
      CHECK(rel(free_euclidean_propagator(tau, x, cold), vac) < 1e-8);
    }
  }
  SUBCASE("spatial decay rate at least m") {
    const auto q = params(1.0, 3.0);
    const double a = std::log(free_euclidean_propagator(0.7, 5.0, q));
    const double b = std::log(free_euclidean_propagator(0.7, 10.0, q));
    const double rate = (a - b) / 5.0;
    CHECK(rate >= 1.0 * (1.0 - 1e-3));
    CHECK(rate < 1.2);
  }
  CHECK_THROWS_AS(free_euclidean_propagator(0.0, 0.0, p), SingularityError);
  CHECK_THROWS_AS(free_euclidean_propagator(2.5, 0.0, p), DomainError);
}

TEST_CASE("free Wightman function") {
  const auto p = params(1.0, 2.0);
  SUBCASE("imaginary axis equals the Euclidean propagator") {
    for (int i = 1; i <= 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        const double tau = 2.0 * i / 11.0;
        const double x = 0.3 * j;
        const auto w = free_wightman({0.0, -tau}, x, p);
        const double s = free_euclidean_propagator(tau, x, p);
        CHECK(rel(w.real(), s) < 1e-10);
        CHECK(std::abs(w.imag()) < 1e-10 * s);
      }
    }
  }
  SUBCASE("KMS exchange") {
    const double eps = 1e-3 * p.beta;
    for (double t : {0.0, 0.3, 1.2, 2.7}) {
      for (double x : {0.0, 0.5, 1.7}) {
        const auto lhs = free_wightman({t, -p.beta + eps}, x, p);
        const auto rhs = free_wightman({-t, -eps}, x, p);
        CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
      }
    }
  }
  SUBCASE("real at the strip midline") {
    for (double x : {0.0, 0.7, 2.0}) CHECK(std::abs(free_wightman({0.0, -1.0}, x, p).imag()) < 1e-14);
  }
  SUBCASE("real-time boundary value is finite and symmetric in x") {
    const auto a = free_wightman({0.8, 0.0}, 0.3, p);
    const auto b = free_wightman({0.8, 0.0}, -0.3, p);
    CHECK(std::isfinite(a.real()));
    CHECK(std::abs(a - b) < 1e-12);
  }
  CHECK_THROWS_AS(free_wightman({0.0, 0.1}, 0.0, p), DomainError);
  CHECK_THROWS_AS(free_wightman({0.0, -2.0}, 0.0, p), DomainError);
}

TEST_CASE("complex Bessel K0") {
  for (double x : {0.01, 0.5, 1.0, 2.0, 5.0, 10.0, 16.9, 17.1, 30.0}) {
    const auto k = bessel_k0({x, 0.0});
    CHECK(rel(k.real(), boost::math::cyl_bessel_k(0, x)) < 1e-13);
    CHECK(k.imag() == 0.0);
  }
  // K0(iy) = -(pi/2) (Y0(y) + i J0(y)).
  for (double y : {0.3, 2.0, 8.0, 16.5, 17.5, 40.0}) {
    const auto k = bessel_k0({0.0, y});
    const std::complex<double> expect =
        -0.5 * std::numbers::pi * std::complex<double>(boost::math::cyl_neumann(0, y), boost::math::cyl_bessel_j(0, y));
    CHECK(std::abs(k - expect) < 1e-13 * std::abs(expect));
  }
  // K0(z) = int_0^inf exp(-z cosh u) du for Re z > 0.
  boost::math::quadrature::exp_sinh<double> es;
  for (std::complex<double> z : {std::complex<double>(3.0, 4.0), std::complex<double>(12.0, 11.9),
                                 std::complex<double>(12.1, 12.1), std::complex<double>(0.7, -2.5)}) {
    const double re = es.integrate([&](double u) { return (std::exp(-z * std::cosh(u))).real(); });
    const double im = es.integrate([&](double u) { return (std::exp(-z * std::cosh(u))).imag(); });
    const std::complex<double> expect(re, im);
    CHECK(std::abs(bessel_k0(z) - expect) < 1e-11 * std::abs(expect));
  }
  CHECK_THROWS_AS(bessel_k0(0.0), DomainError);
  CHECK_THROWS_AS(bessel_k0({-1.0, 0.5}), DomainError);
}

TEST_CASE("real-time Wightman function against direct integration") {
  const auto p = params(0.9, 2.0);
  const double s = 1.0;
  for (double t : {0.4, -1.3, 2.5}) {
    for (double x : {0.0, 0.6, 1.9}) {
      // (1/pi) int_0^inf dk cos(kx) [(1+rho) e^{-nu s} e^{-i nu t} + rho e^{nu s} e^{i nu t}] / (2 nu)
      const auto part = [&](bool imaginary) {
        return [&, imaginary](double k) {
          const double nu = std::hypot(k, p.mass);
          const double rho = 1.0 / std::expm1(p.beta * nu);
          const std::complex<double> v = (1.0 + rho) * std::exp(-nu * s) * std::polar(1.0, -nu * t) +
                                         rho * std::exp(nu * s) * std::polar(1.0, nu * t);
          return std::cos(k * x) * (imaginary ? v.imag() : v.real()) / (2.0 * nu) / std::numbers::pi;
        };
      };
      using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
      const auto integral = [&](bool imaginary) {
        double sum = 0.0;
        for (int k = 0; k < 60; ++k) sum += gk::integrate(part(imaginary), k, k + 1.0, 8, 1e-12);
        return sum;
      };
      const std::complex<double> expect(integral(false), integral(true));
      CHECK(std::abs(free_wightman({t, -s}, x, p) - expect) < 1e-10 * std::abs(expect));
    }
  }
}

TEST_CASE("free KMS expectation") {
  const auto p = params(0.8, 1.5);
  CHECK(free_kms_expectation([](double) { return std::complex<double>{0.0, 0.0}; }, p) == 1.0);

  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  boost::math::quadrature::sinh_sinh<double> ss;
  for (int i = 0; i < 20; ++i) {
    const double amp = 0.2 + 1.5 * u(gen);
    const double k0 = 4.0 * u(gen) - 2.0;
    const double width = 0.3 + 2.0 * u(gen);
    const auto h = [=](double k) {
      return std::complex<double>{amp * std::exp(-(k - k0) * (k - k0) / (2.0 * width * width)), 0.0};
    };
    // (h, (1 + 2 rho) h) with the (2 nu)^{-1} inner product, by an independent quadrature rule.
    const double form = ss.integrate([&](double k) {
      const double nu = std::hypot(k, p.mass);
      return std::norm(h(k)) * (1.0 + 2.0 / std::expm1(p.beta * nu)) / (2.0 * nu) / (2.0 * std::numbers::pi);
    });
    const double oracle = std::exp(-0.25 * form);
    const double value = free_kms_expectation(h, p);
    CHECK(rel(value, oracle) < 1e-10);
    const auto h_scaled = [&](double k) { return h(k) / std::sqrt(2.0); };
    CHECK(rel(value, std::exp(-0.5 * thermal_covariance_form(h_scaled, p))) < 1e-10);
    CHECK(value > 0.0);
    CHECK(value <= 1.0);
  }

  SUBCASE("monotone in beta") {
    const auto h = [](double k) { return std::complex<double>{std::exp(-k * k), 0.0}; };
    double prev = 0.0;
    for (double beta : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double v = free_kms_expectation(h, params(1.0, beta));
      CHECK(v >= prev);
      prev = v;
    }
  }
  SUBCASE("tabulated overload agrees") {
    std::vector<double> k;
    std::vector<std::complex<double>> hv;
    for (int i = -4000; i <= 4000; ++i) {
      k.push_back(i * 0.0025);
      hv.emplace_back(std::exp(-k.back() * k.back()), 0.0);
    }
    const double tab = free_kms_expectation(k, hv, p);
    const double fn = free_kms_expectation([](double q) { return std::complex<double>{std::exp(-q * q), 0.0}; }, p);
    CHECK(rel(tab, fn) < 1e-8);
  }
  CHECK_THROWS_AS(free_kms_expectation([](double) { return std::complex<double>{1.0, 0.0}; }, p),
                  IntegrationFailure);
}

TEST_CASE("model parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.poly = Polynomial::quartic(0.5);
  CHECK_NOTHROW(p.validate());
  p.poly = Polynomial({0.0, 0.0, 0.0, 1.0});
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p.poly = Polynomial({0.0, 0.0, 0.0, 0.0, -1.0});
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p.poly = Polynomial({1.0, 0.0, 0.0, 0.0, 0.0});
  CHECK(p.poly.degree() == 0);
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p = ModelParams{};
  p.mass = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
}
