#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "phigeo/error.hpp"
#include "phigeo/specfun.hpp"

namespace phigeo::specfun {

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1)
    throw DomainError("Tolerance: abs_tol and rel_tol must be > 0, max_iter >= 1");
}

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

// Series about the branch point -1/e in p = sqrt(2(e x + 1)); sign selects the branch.
double branch_point_seed(double x, double sign) {
  const double p = sign * std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
  return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

double seed(Branch branch, double x) {
  if (branch == Branch::principal) {
    if (x < -0.25) return branch_point_seed(x, 1.0);
    if (x < 3.0) return std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
  }
  if (x < -0.25) return branch_point_seed(x, -1.0);
  const double l1 = std::log(-x);
  const double l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

double residual(double w, double x) { return w * std::exp(w) - x; }

double bisect(Branch branch, double x, const Tolerance& tol) {
  double lo, hi;
  if (branch == Branch::principal) {
    lo = -1.0;
    hi = std::max(1.0, std::log1p(std::max(x, 0.0)) + 1.0);
  } else {
    lo = -2.0;
    while (residual(lo, x) < 0.0) lo *= 2.0;  // w e^w -> 0- as w -> -inf
    hi = -1.0;
  }
  // w e^w is increasing on [-1, inf) and decreasing on (-inf, -1].
  const double dir = branch == Branch::principal ? 1.0 : -1.0;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (dir * residual(mid, x) > 0.0)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= tol.abs_tol + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid))
      break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double lambert_w(Branch branch, double x, const Tolerance& tol) {
  tol.validate();
  if (std::isnan(x)) throw DomainError("lambert_w: NaN argument");
  if (x < -kInvE) {
    // Allow a few ulps of slack below -1/e, which arises from rounding of -exp(-1).
    if (x < -kInvE * (1.0 + 8.0 * std::numeric_limits<double>::epsilon()))
      throw DomainError("lambert_w: argument below -1/e");
    return -1.0;
  }
  if (branch == Branch::lower && x >= 0.0)
    throw DomainError("lambert_w: lower branch requires -1/e <= x < 0");
  if (branch == Branch::principal && x == 0.0) return 0.0;
  if (std::isinf(x)) return x;
  if (x == -kInvE) return -1.0;

  double w = seed(branch, x);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < tol.max_iter && it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (std::abs(wp1) < 1e-300) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    const double next = w - step;
    if (!std::isfinite(next)) break;
    w = next;
    if (std::abs(step) <= 4.0 * eps * (1.0 + std::abs(w))) {
      const bool on_branch = branch == Branch::principal ? w >= -1.0 : w <= -1.0;
      if (on_branch) return w;
      break;
    }
  }
  const double wb = bisect(branch, x, tol);
  if (!std::isfinite(wb)) throw NonConvergence("lambert_w: bisection fallback failed");
  return wb;
}

}  // namespace phigeo::specfun
