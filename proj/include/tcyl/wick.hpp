#pragma once

// Wick-ordered interaction and the lattice action.

#include <vector>

#include "tcyl/lattice.hpp"
#include "tcyl/spectral.hpp"

namespace tcyl {

/// Ordinary-polynomial form Q(phi) = :P(phi):_c of a Wick-ordered polynomial.
struct WickPolynomial {
  std::vector<double> coeffs;  // coeffs[j] multiplies phi^j
  double wick_c = 0.0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double phi) const {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * phi + *it;
    return v;
  }
};

/// :phi^a:_c = sum_{j <= a/2} a! / (j! (a-2j)!) (-c/2)^j phi^{a-2j}, extended linearly.
WickPolynomial wick_order(const Polynomial& p, double c);

/// S[phi] = sum_sites a_t a_x [ (d_t phi)^2/2 + (d_x phi)^2/2 + m^2 phi^2/2 + Q(phi) ]
/// with periodic forward differences.  Sites are summed in row-major order with
/// compensated summation.
double lattice_action(const FieldConfig& cfg, const LatticeSpec& spec, double m, const WickPolynomial& q);

/// Action of the transposed configuration on the transposed grid.  Equal to
/// lattice_action(cfg, ...) up to summation rounding whenever a_t == a_x.
double nelson_transpose_action(const FieldConfig& cfg, const LatticeSpec& spec, double m,
                               const WickPolynomial& q);

/// Local action data used by single-site updates.
class LocalAction {
 public:
  LocalAction(const LatticeSpec& spec, double m, WickPolynomial q);

  /// S[cfg with site (t, x) set to `value`] - S[cfg], from the local stencil only.
  double delta(const FieldConfig& cfg, int t, int x, double value) const;

  const LatticeSpec& spec() const { return spec_; }
  const WickPolynomial& potential() const { return q_; }
  double mass() const { return m_; }

 private:
  LatticeSpec spec_;
  double m_;
  WickPolynomial q_;
  double inv_at2_;
  double inv_ax2_;
};

}  // namespace tcyl
