#pragma once

// Numerical integration helpers shared by the kernel modules.

#include <cmath>
#include <functional>

namespace tcyl {

/// Neumaier-compensated running sum.  Order-dependent only at the level of
/// the final rounding.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace quad {

using RealFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on [a, b]; a or b may be infinite.
/// Throws IntegrationFailure if the result is not finite.
double adaptive(const RealFn& f, double a, double b, double rel_tol = 1e-13);

/// Integral over [0, upper] split into panels of at most `panel` width, each
/// integrated adaptively.  Meant for moderately oscillatory integrands.  When
/// `first` is positive the first panel is [0, first] and the remaining ones
/// start there, so panel edges can be placed on the zeros of the integrand.
double panels(const RealFn& f, double upper, double panel, double rel_tol = 1e-13, double first = 0.0);

/// int_0^inf f(k) cos(omega k) dk for slowly decaying f (double-exponential rule).
double fourier_cos(const RealFn& f, double omega);

}  // namespace quad
}  // namespace tcyl
