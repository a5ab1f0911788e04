#include "tcyl/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <string>

#include "tcyl/errors.hpp"

namespace tcyl::quad {

namespace {

constexpr unsigned kMaxDepth = 30;

boost::math::quadrature::ooura_fourier_cos<double>& cos_integrator() {
  static boost::math::quadrature::ooura_fourier_cos<double> integrator(1e-14, 8);
  return integrator;
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw IntegrationFailure(std::string(what) + ": non-finite result");
  }
  return v;
}

}  // namespace

double adaptive(const RealFn& f, double a, double b, double rel_tol) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, kMaxDepth, rel_tol, &err);
  return checked(v, "adaptive quadrature");
}

double panels(const RealFn& f, double upper, double panel, double rel_tol, double first) {
  if (upper <= 0.0) return 0.0;
  CompensatedSum total;
  const auto add = [&](double lo, double hi) {
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, rel_tol,
                                                                            &err);
  };
  double start = 0.0;
  if (first > 0.0) {
    start = std::min(first, upper);
    add(0.0, start);
  }
  const double rest = upper - start;
  if (rest <= 0.0) return checked(total.value(), "panel quadrature");
  const auto n = std::max(1L, static_cast<long>(std::ceil(rest / panel)));
  for (long i = 0; i < n; ++i) {
    const double lo = start + static_cast<double>(i) * panel;
    const double hi = (i + 1 == n) ? upper : std::min(upper, lo + panel);
    if (hi > lo) add(lo, hi);
  }
  return checked(total.value(), "panel quadrature");
}

double fourier_cos(const RealFn& f, double omega) {
  if (omega == 0.0) return adaptive(f, 0.0, std::numeric_limits<double>::infinity());
  // The rule assumes omega > 0; cos is even.
  return checked(cos_integrator().integrate(f, std::abs(omega)).first, "Fourier cosine integral");
}

}  // namespace tcyl::quad
