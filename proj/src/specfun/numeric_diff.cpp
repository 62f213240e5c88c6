#include <cmath>
#include <limits>

#include "phigeo/error.hpp"
#include "phigeo/specfun.hpp"

namespace phigeo::specfun {

namespace {

const double kGradStep = std::cbrt(std::numeric_limits<double>::epsilon());
const double kHessStep = std::pow(std::numeric_limits<double>::epsilon(), 0.25);

double checked(double v) {
  if (!std::isfinite(v)) throw EvaluationError("numeric_diff: non-finite value at stencil point");
  return v;
}

}  // namespace

Eigen::VectorXd gradient(const VecFn& f, const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = std::max(std::abs(x[i]), 1.0) * kGradStep;
    xp[i] = x[i] + h;
    const double fp = checked(f(xp));
    xp[i] = x[i] - h;
    const double fm = checked(f(xp));
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd hessian(const VecFn& f, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd h(n);
  for (Eigen::Index i = 0; i < n; ++i) h[i] = std::max(std::abs(x[i]), 1.0) * kHessStep;
  const double f0 = checked(f(x));
  Eigen::MatrixXd H(n, n);
  Eigen::VectorXd xs = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    xs[i] = x[i] + h[i];
    const double fp = checked(f(xs));
    xs[i] = x[i] - h[i];
    const double fm = checked(f(xs));
    xs[i] = x[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      auto at = [&](double si, double sj) {
        xs[i] = x[i] + si * h[i];
        xs[j] = x[j] + sj * h[j];
        const double v = checked(f(xs));
        xs[i] = x[i];
        xs[j] = x[j];
        return v;
      };
      const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h[i] * h[j]);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

double derivative(const RealFn& f, double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  return gradient([&](const Eigen::VectorXd& y) { return f(y[0]); }, v)[0];
}

double derivative_relative(const RealFn& f, double x, double rel_step) {
  const double h = std::max(std::abs(x), std::numeric_limits<double>::min()) * rel_step;
  const double v = (-checked(f(x + 2 * h)) + 8 * checked(f(x + h)) - 8 * checked(f(x - h)) + checked(f(x - 2 * h))) /
                   (12.0 * h);
  return v;
}

}  // namespace phigeo::specfun
