#include <cmath>
#include <limits>
#include <string>

#include "phigeo/error.hpp"
#include "phigeo/specfun.hpp"

namespace phigeo::specfun {

double find_root(const RealFn& f, double lo, double hi, const Tolerance& tol) {
  tol.validate();
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (std::isnan(fa) || std::isnan(fb)) throw EvaluationError("find_root: NaN at bracket endpoint");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw DomainError("find_root: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");

  const double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < tol.max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double xtol = 2.0 * eps * std::abs(b) + 0.5 * tol.abs_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= xtol || fb == 0.0) return b;

    if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points differ.
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(xtol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > xtol ? d : (m > 0.0 ? xtol : -xtol);
    fb = f(b);
    if (std::isnan(fb)) throw EvaluationError("find_root: NaN inside bracket");
  }
  throw NonConvergence("find_root: iteration budget exhausted");
}

}  // namespace phigeo::specfun
