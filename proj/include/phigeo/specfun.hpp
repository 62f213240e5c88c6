#pragma once

#include <Eigen/Core>
#include <functional>
#include <span>

namespace phigeo::specfun {

/// Accuracy targets shared by the iterative kernels.
struct Tolerance {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_iter = 2000;

  void validate() const;
};

using RealFn = std::function<double(double)>;
using VecFn = std::function<double(const Eigen::VectorXd&)>;

enum class Branch { principal, lower };

/// Real branches of the Lambert W function, w * exp(w) = x.
/// Halley iteration from asymptotic seeds, bisection fallback.
double lambert_w(Branch branch, double x, const Tolerance& tol = {});

/// Upper incomplete gamma function Gamma(s, x) for real s and x >= 0
/// (unregularized). Negative s is reached by upward recurrence.
double upper_gamma(double s, double x);

/// Adaptive Gauss-Kronrod (7/15) quadrature with global bisection. The rule
/// never samples the endpoints, so integrable endpoint singularities are fine.
double integrate(const RealFn& f, double a, double b, const Tolerance& tol = {});

/// Integral over [a, inf) using the map t = a + s / (1 - s).
double integrate_to_infinity(const RealFn& f, double a, const Tolerance& tol = {});

/// Integral over (0, b] of a function with a possible singularity at 0,
/// evaluated through the substitution x = b * exp(-t).
double integrate_from_zero(const RealFn& f, double b, const Tolerance& tol = {});

/// Brent's method on a sign-changing bracket.
double find_root(const RealFn& f, double lo, double hi, const Tolerance& tol = {});

enum class DiffOrder { gradient, hessian };

/// Central-difference gradient, step max(|x_i|, 1) * eps^(1/3).
Eigen::VectorXd gradient(const VecFn& f, const Eigen::VectorXd& x);

/// Second differences, step max(|x_i|, 1) * eps^(1/4). Output is exactly symmetric.
Eigen::MatrixXd hessian(const VecFn& f, const Eigen::VectorXd& x);

/// Scalar convenience: df/dx with the gradient step rule.
double derivative(const RealFn& f, double x);

/// Five-point derivative with step rel_step * |x|; used for internal
/// consistency checks on positive arguments.
double derivative_relative(const RealFn& f, double x, double rel_step = 1e-3);

}  // namespace phigeo::specfun
