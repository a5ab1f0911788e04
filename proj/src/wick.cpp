#include "tcyl/wick.hpp"

#include <cmath>

#include "tcyl/errors.hpp"
#include "tcyl/quadrature.hpp"

namespace tcyl {

namespace {

double site_term(double phi, double fwd_t, double fwd_x, const LatticeSpec& spec, double m2,
                 const WickPolynomial& q) {
  const double dt = (fwd_t - phi) / spec.a_t;
  const double dx = (fwd_x - phi) / spec.a_x;
  const double kin = 0.5 * (dt * dt) + 0.5 * (dx * dx);
  return spec.cell() * ((kin + 0.5 * m2 * (phi * phi)) + q(phi));
}

}  // namespace

WickPolynomial wick_order(const Polynomial& p, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParameter("wick_order: c must be positive");
  const auto& a = p.coeffs();
  WickPolynomial q{std::vector<double>(a.size(), 0.0), c};
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n] == 0.0) continue;
    // term_j = n! / (j! (n-2j)!) (-c/2)^j, built up recursively in j.
    double term = 1.0;
    for (std::size_t j = 0; 2 * j <= n; ++j) {
      if (j > 0) {
        const double num = static_cast<double>((n - 2 * j + 2) * (n - 2 * j + 1));
        term *= num / static_cast<double>(j) * (-0.5 * c);
      }
      q.coeffs[n - 2 * j] += a[n] * term;
    }
  }
  return q;
}

double lattice_action(const FieldConfig& cfg, const LatticeSpec& spec, double m, const WickPolynomial& q) {
  spec.validate();
  if (!cfg.matches(spec)) throw DimensionError("lattice_action: configuration shape does not match lattice");
  const double m2 = m * m;
  CompensatedSum s;
  for (int t = 0; t < spec.n_t; ++t) {
    const int tp = (t + 1) % spec.n_t;
    for (int x = 0; x < spec.n_x; ++x) {
      const int xp = (x + 1) % spec.n_x;
      s += site_term(cfg(t, x), cfg(tp, x), cfg(t, xp), spec, m2, q);
    }
  }
  return s.value();
}

double nelson_transpose_action(const FieldConfig& cfg, const LatticeSpec& spec, double m,
                               const WickPolynomial& q) {
  if (!cfg.matches(spec)) {
    throw DimensionError("nelson_transpose_action: configuration shape does not match lattice");
  }
  return lattice_action(cfg.transposed(), spec.transposed(), m, q);
}

LocalAction::LocalAction(const LatticeSpec& spec, double m, WickPolynomial q)
    : spec_(spec),
      m_(m),
      q_(std::move(q)),
      inv_at2_(1.0 / (spec.a_t * spec.a_t)),
      inv_ax2_(1.0 / (spec.a_x * spec.a_x)) {
  spec_.validate();
}

double LocalAction::delta(const FieldConfig& cfg, int t, int x, double value) const {
  const double old = cfg(t, x);
  const double d = value - old;
  const double sum = value + old;
  double kin = 0.0;
  // (phi' - phi)(phi' + phi - phi_+ - phi_-) / a^2 per direction; a single-site
  // direction has no gradient.
  if (spec_.n_t > 1) {
    const int tp = t + 1 == spec_.n_t ? 0 : t + 1;
    const int tm = t == 0 ? spec_.n_t - 1 : t - 1;
    kin += inv_at2_ * (sum - cfg(tp, x) - cfg(tm, x));
  }
  if (spec_.n_x > 1) {
    const int xp = x + 1 == spec_.n_x ? 0 : x + 1;
    const int xm = x == 0 ? spec_.n_x - 1 : x - 1;
    kin += inv_ax2_ * (sum - cfg(t, xp) - cfg(t, xm));
  }
  const double mass = 0.5 * m_ * m_ * sum;
  return spec_.cell() * (d * (kin + mass) + (q_(value) - q_(old)));
}

}  // namespace tcyl
