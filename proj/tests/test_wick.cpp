#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "tcyl/errors.hpp"
#include "tcyl/lattice.hpp"
#include "tcyl/rng.hpp"
#include "tcyl/wick.hpp"

using namespace tcyl;

namespace {

Polynomial monomial(int n, double coeff = 1.0) {
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c.back() = coeff;
  return Polynomial(c);
}

// Nodes and weights of the n-point Gauss rule for the standard normal density
// (Golub-Welsch on the probabilists' Hermite recurrence).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_hermite_normal(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussRule rule;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(es.eigenvalues()(i));
    const double v0 = es.eigenvectors()(0, i);
    rule.weights.push_back(v0 * v0);
  }
  return rule;
}

FieldConfig random_config(const LatticeSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  auto cfg = FieldConfig::zeros(spec);
  for (double& v : cfg.values) v = rng.normal();
  return cfg;
}

}  // namespace

TEST_CASE("Wick monomials in closed form") {
  const double c = 0.7;
  const auto q2 = wick_order(monomial(2), c);
  CHECK(q2.coeffs == std::vector<double>{-c, 0.0, 1.0});
  CHECK(q2.wick_c == c);

  const auto q4 = wick_order(monomial(4), c);
  REQUIRE(q4.coeffs.size() == 5);
  CHECK(q4.coeffs[4] == 1.0);
  CHECK(q4.coeffs[3] == 0.0);
  CHECK(q4.coeffs[2] == doctest::Approx(-6.0 * c).epsilon(1e-15));
  CHECK(q4.coeffs[1] == 0.0);
  CHECK(q4.coeffs[0] == doctest::Approx(3.0 * c * c).epsilon(1e-15));

  const auto q6 = wick_order(Polynomial({0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0}), 1.0);
  CHECK(q6.degree() == 6);
  CHECK(q6.coeffs[6] == 2.0);
  CHECK(q6.coeffs[0] == doctest::Approx(0.5 - 2.0 * 15.0).epsilon(1e-15));

  CHECK_THROWS_AS(wick_order(monomial(2), 0.0), InvalidParameter);
  CHECK_THROWS_AS(wick_order(monomial(2), -1.0), InvalidParameter);
  CHECK(wick_order(Polynomial::zero(), 1.0).coeffs.empty());
}

TEST_CASE("Wick monomials have zero Gaussian mean") {
  const auto rule = gauss_hermite_normal(64);
  double total = 0.0;
  for (double w : rule.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

  for (double c : {0.3, 1.0, 2.7}) {
    for (int n = 1; n <= 8; ++n) {
      const auto q = wick_order(monomial(n), c);
      double mean = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        mean += rule.weights[i] * q(std::sqrt(c) * rule.nodes[i]);
      }
      CAPTURE(c);
      CAPTURE(n);
      CHECK(std::abs(mean) < 1e-10);
    }
  }
}

TEST_CASE("Wick ordering is linear and satisfies the c-derivative identity") {
  const Polynomial a({0.1, 0.0, 0.4, 0.0, 1.5});
  const Polynomial b({0.0, 0.0, -0.2, 0.0, 0.0, 0.0, 0.3});
  const Polynomial sum({0.1, 0.0, 0.2, 0.0, 1.5, 0.0, 0.3});
  const auto qa = wick_order(a, 1.3);
  const auto qb = wick_order(b, 1.3);
  const auto qs = wick_order(sum, 1.3);
  for (double phi : {-2.0, -0.3, 0.0, 0.8, 1.7}) {
    CHECK(qs(phi) == doctest::Approx(qa(phi) + qb(phi)).epsilon(1e-13));
  }

  const double c = 0.9;
  const double h = 1e-5;
  for (int n = 2; n <= 8; ++n) {
    const auto plus = wick_order(monomial(n), c + h);
    const auto minus = wick_order(monomial(n), c - h);
    const auto lower = wick_order(monomial(n - 2), c);
    for (double phi : {-1.4, 0.3, 2.1}) {
      const double fd = (plus(phi) - minus(phi)) / (2.0 * h);
      const double exact = -0.5 * n * (n - 1) * lower(phi);
      CAPTURE(n);
      CAPTURE(phi);
      CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
    }
  }
}

TEST_CASE("lattice action on trivial configurations") {
  const LatticeSpec spec{8, 4, 0.5, 0.25};
  const double m = 1.2;
  const auto q = wick_order(Polynomial::quartic(0.5), 0.4);
  const auto qfree = wick_order(Polynomial::quartic(1.0), 0.4);

  CHECK(lattice_action(FieldConfig::zeros(spec), spec, m, WickPolynomial{{}, 0.4}) == 0.0);
  CHECK(lattice_action(FieldConfig::zeros(spec), spec, m, q) ==
        doctest::Approx(spec.beta() * spec.length() * q(0.0)).epsilon(1e-14));

  const double v = 0.75;
  const double expect = spec.beta() * spec.length() * (0.5 * m * m * v * v + qfree(v));
  CHECK(lattice_action(FieldConfig::constant(spec, v), spec, m, qfree) == doctest::Approx(expect).epsilon(1e-14));

  CHECK_THROWS_AS(lattice_action(FieldConfig::zeros(LatticeSpec{4, 4, 0.5, 0.25}), spec, m, q), DimensionError);
}

TEST_CASE("quadratic action equals the spectral quadratic form") {
  const LatticeSpec spec{6, 5, 0.4, 0.7};
  const double m = 0.8;
  const auto cfg = random_config(spec, 11);
  const auto lambda = lattice_eigenvalues(spec, m);
  // Direct DFT: (cell / 2) sum_k lambda_k |phi_k|^2 / N with phi_k = sum_s e^{-iks} phi_s.
  double form = 0.0;
  for (int p = 0; p < spec.n_t; ++p) {
    for (int q = 0; q < spec.n_x; ++q) {
      std::complex<double> mode = 0.0;
      for (int t = 0; t < spec.n_t; ++t) {
        for (int x = 0; x < spec.n_x; ++x) {
          const double angle = -2.0 * std::numbers::pi * (double(p * t) / spec.n_t + double(q * x) / spec.n_x);
          mode += cfg(t, x) * std::polar(1.0, angle);
        }
      }
      form += lambda[spec.index(p, q)] * std::norm(mode);
    }
  }
  form *= 0.5 * spec.cell() / static_cast<double>(spec.volume());
  CHECK(lattice_action(cfg, spec, m, WickPolynomial{{}, 1.0}) == doctest::Approx(form).epsilon(1e-12));
}

TEST_CASE("discrete Nelson transposition") {
  const double m = 1.0;
  const auto q = wick_order(Polynomial::quartic(0.5), 0.3);

  SUBCASE("square 8x8") {
    const LatticeSpec spec{8, 8, 0.25, 0.25};
    const auto cfg = random_config(spec, 3);
    const double s = lattice_action(cfg, spec, m, q);
    const double st = nelson_transpose_action(cfg, spec, m, q);
    CHECK(std::abs(s - st) / std::abs(s) < 1e-13);
  }
  SUBCASE("rectangular 4x8") {
    const LatticeSpec spec{4, 8, 0.25, 0.25};
    const auto cfg = random_config(spec, 4);
    const double s = lattice_action(cfg, spec, m, q);
    const double st = lattice_action(cfg.transposed(), LatticeSpec{8, 4, 0.25, 0.25}, m, q);
    CHECK(std::abs(s - st) / std::abs(s) < 1e-13);
    CHECK(nelson_transpose_action(cfg, spec, m, q) == st);
  }
  SUBCASE("unequal spacings break the symmetry") {
    const LatticeSpec spec{8, 8, 0.25, 0.5};
    const auto cfg = random_config(spec, 5);
    CHECK(std::abs(lattice_action(cfg, spec, m, q) - nelson_transpose_action(cfg, spec, m, q)) > 0.0);
  }
}

TEST_CASE("lattice action symmetries") {
  const LatticeSpec spec{6, 10, 0.3, 0.2};
  const double m = 0.9;
  const auto q = wick_order(Polynomial({0.0, 0.0, 0.3, 0.0, 0.5}), 0.6);
  const auto cfg = random_config(spec, 9);
  const double s = lattice_action(cfg, spec, m, q);

  for (const auto& [dt, dx] : std::vector<std::pair<int, int>>{{1, 0}, {0, 3}, {5, 7}}) {
    auto shifted = FieldConfig::zeros(spec);
    for (int t = 0; t < spec.n_t; ++t) {
      for (int x = 0; x < spec.n_x; ++x) shifted((t + dt) % spec.n_t, (x + dx) % spec.n_x) = cfg(t, x);
    }
    CHECK(lattice_action(shifted, spec, m, q) == doctest::Approx(s).epsilon(1e-13));
  }

  auto flipped = cfg;
  for (double& v : flipped.values) v = -v;
  CHECK(lattice_action(flipped, spec, m, q) == doctest::Approx(s).epsilon(1e-14));
}

TEST_CASE("local action difference matches the full action") {
  const LatticeSpec spec{5, 7, 0.3, 0.45};
  const double m = 1.1;
  const auto q = wick_order(Polynomial::quartic(0.8), 0.5);
  const LocalAction local(spec, m, q);
  auto cfg = random_config(spec, 21);
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const int t = static_cast<int>(rng.uniform() * spec.n_t);
    const int x = static_cast<int>(rng.uniform() * spec.n_x);
    const double value = cfg(t, x) + rng.uniform(-1.0, 1.0);
    const double before = lattice_action(cfg, spec, m, q);
    const double d = local.delta(cfg, t, x, value);
    cfg(t, x) = value;
    const double after = lattice_action(cfg, spec, m, q);
    CHECK(d == doctest::Approx(after - before).epsilon(1e-10).scale(std::abs(before)));
  }

  const LatticeSpec single{1, 1, 1.0, 1.0};
  const LocalAction one(single, 1.0, q);
  const auto zero = FieldConfig::zeros(single);
  CHECK(one.delta(zero, 0, 0, 0.5) == doctest::Approx(0.5 * 0.25 + q(0.5) - q(0.0)).epsilon(1e-15));
}
