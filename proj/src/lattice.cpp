#include "tcyl/lattice.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "tcyl/errors.hpp"
#include "tcyl/quadrature.hpp"

namespace tcyl {

namespace {

using std::numbers::pi;

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

LatticeSpec LatticeSpec::for_model(const ModelParams& params, int n_t, int n_x) {
  params.validate();
  LatticeSpec spec{n_t, n_x, params.beta / n_t, params.circumference / n_x};
  spec.validate();
  return spec;
}

void LatticeSpec::validate() const {
  if (n_t < 1 || n_x < 1) throw InvalidParameter("lattice extents must be positive");
  if (!(a_t > 0.0) || !(a_x > 0.0) || !std::isfinite(a_t) || !std::isfinite(a_x)) {
    throw InvalidParameter("lattice spacings must be positive and finite");
  }
}

void LatticeSpec::validate_against(const ModelParams& params) const {
  validate();
  params.validate();
  if (!close_rel(beta(), params.beta, 1e-12)) {
    throw InvalidParameter("lattice: n_t * a_t must equal beta");
  }
  if (!close_rel(length(), params.circumference, 1e-12)) {
    throw InvalidParameter("lattice: n_x * a_x must equal the spatial circumference");
  }
}

FieldConfig FieldConfig::zeros(const LatticeSpec& spec) { return constant(spec, 0.0); }

FieldConfig FieldConfig::constant(const LatticeSpec& spec, double v) {
  spec.validate();
  return {spec.n_t, spec.n_x, std::vector<double>(spec.volume(), v)};
}

bool FieldConfig::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

FieldConfig FieldConfig::transposed() const {
  FieldConfig out{n_x, n_t, std::vector<double>(values.size())};
  for (int t = 0; t < n_t; ++t) {
    for (int x = 0; x < n_x; ++x) out(x, t) = (*this)(t, x);
  }
  return out;
}

double FieldConfig::mean() const {
  CompensatedSum s;
  for (double v : values) s += v;
  return values.empty() ? 0.0 : s.value() / static_cast<double>(values.size());
}

std::vector<double> lattice_eigenvalues(const LatticeSpec& spec, double m) {
  spec.validate();
  if (!(m > 0.0)) throw InvalidParameter("mass must be positive");
  std::vector<double> st(spec.n_t);
  std::vector<double> sx(spec.n_x);
  for (int p = 0; p < spec.n_t; ++p) {
    const double s = std::sin(pi * p / spec.n_t);
    st[p] = 4.0 / (spec.a_t * spec.a_t) * s * s;
  }
  for (int q = 0; q < spec.n_x; ++q) {
    const double s = std::sin(pi * q / spec.n_x);
    sx[q] = 4.0 / (spec.a_x * spec.a_x) * s * s;
  }
  // A single-site direction has no gradient, and sin(pi * 0) is already 0.
  std::vector<double> lambda(spec.volume());
  for (int p = 0; p < spec.n_t; ++p) {
    for (int q = 0; q < spec.n_x; ++q) lambda[spec.index(p, q)] = st[p] + sx[q] + m * m;
  }
  return lambda;
}

double LatticeCovariance::operator()(int dt, int dx) const {
  return position_kernel[spec.index(wrap(dt, spec.n_t), wrap(dx, spec.n_x))];
}

LatticeCovariance exact_lattice_covariance(const LatticeSpec& spec, double m) {
  LatticeCovariance cov{spec, m, lattice_eigenvalues(spec, m), {}};
  detail::Fft2d fft(spec.n_t, spec.n_x);
  auto buf = fft.data();
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = 1.0 / (spec.cell() * cov.eigenvalues[i]);
  fft.backward();
  const double norm = 1.0 / static_cast<double>(spec.volume());
  std::vector<double> raw(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) raw[i] = buf[i].real() * norm;
  // Enforce the exact reflection symmetries C(t, x) = C(-t, x) = C(t, -x), and
  // on square lattices with equal spacings also C(t, x) = C(x, t).  Each
  // symmetry permutes the operands of a single pairwise addition.
  const bool square = spec.n_t == spec.n_x && spec.a_t == spec.a_x;
  const auto reflected = [&](int t, int x) {
    const int mt = wrap(-t, spec.n_t);
    const int mx = wrap(-x, spec.n_x);
    return (raw[spec.index(t, x)] + raw[spec.index(mt, mx)]) + (raw[spec.index(mt, x)] + raw[spec.index(t, mx)]);
  };
  cov.position_kernel.resize(raw.size());
  for (int t = 0; t < spec.n_t; ++t) {
    for (int x = 0; x < spec.n_x; ++x) {
      cov.position_kernel[spec.index(t, x)] =
          square ? 0.125 * (reflected(t, x) + reflected(x, t)) : 0.25 * reflected(t, x);
    }
  }
  return cov;
}

FieldConfig sample_gff(const LatticeSpec& spec, double m, std::uint64_t seed) {
  Rng rng(seed);
  return sample_gff(spec, m, rng);
}

FieldConfig sample_gff(const LatticeSpec& spec, double m, Rng& rng) {
  const auto lambda = lattice_eigenvalues(spec, m);
  detail::Fft2d fft(spec.n_t, spec.n_x);
  auto modes = fft.data();
  // Modes are visited in row-major order.  A mode and its conjugate partner
  // share one complex normal (drawn when the smaller index is reached);
  // self-conjugate modes get a single real normal with the full variance.
  for (int p = 0; p < spec.n_t; ++p) {
    for (int q = 0; q < spec.n_x; ++q) {
      const std::size_t i = spec.index(p, q);
      const std::size_t j = spec.index(wrap(-p, spec.n_t), wrap(-q, spec.n_x));
      const double sigma = 1.0 / std::sqrt(spec.cell() * lambda[i]);
      if (i == j) {
        modes[i] = sigma * rng.normal();
      } else if (i < j) {
        const double re = rng.normal();
        const double im = rng.normal();
        modes[i] = sigma * std::complex<double>(re, im) * std::numbers::sqrt2 * 0.5;
        modes[j] = std::conj(modes[i]);
      }
    }
  }
  fft.backward();
  FieldConfig cfg = FieldConfig::zeros(spec);
  const double norm = 1.0 / std::sqrt(static_cast<double>(spec.volume()));
  for (std::size_t i = 0; i < cfg.values.size(); ++i) cfg.values[i] = modes[i].real() * norm;
  return cfg;
}

double wick_constant(const LatticeSpec& spec, double m) {
  const auto lambda = lattice_eigenvalues(spec, m);
  CompensatedSum s;
  for (double l : lambda) s += 1.0 / (spec.cell() * l);
  return s.value() / static_cast<double>(spec.volume());
}

}  // namespace tcyl
