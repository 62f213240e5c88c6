#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phigeo/specfun.hpp"

namespace phigeo {

/// A point of the probability simplex. Entry 0 is the dependent coordinate p_0
/// whenever a chart of independent coordinates (p_1, ..., p_{n-1}) is used.
class ProbVec {
 public:
  /// Validates n >= 2, entries >= 0 and |sum - 1| <= 1e-12.
  explicit ProbVec(std::vector<double> probs);

  static ProbVec uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }
  bool interior() const { return interior_; }

  /// Throws BoundaryError unless every entry is strictly positive.
  void require_interior(const char* who) const;

 private:
  std::vector<double> probs_;
  bool interior_ = false;
};

/// Everything needed to build a Deformation. Unset callables mean "not
/// available in closed form"; the Deformation then falls back to quadrature
/// or bracketed inversion.
struct DeformationSpec {
  std::string name;
  std::vector<double> params;

  specfun::RealFn phi;
  specfun::RealFn phi_prime;
  specfun::RealFn phi_second;

  specfun::RealFn log_closed;
  specfun::RealFn exp_closed;
  /// x -> integral of log_phi over (0, x]; only when it converges.
  specfun::RealFn naudts_primitive;

  std::optional<double> log_lower_limit;
  std::optional<double> log_upper_limit;

  /// Open interval of x on which phi is defined.
  double domain_lo = 0.0;
  double domain_hi = std::numeric_limits<double>::infinity();

  /// Log-spaced validation grid, clipped to the domain.
  double check_lo = 1e-9;
  double check_hi = 1e3;
  /// When false, a non-increasing phi on the grid is a warning, not an error.
  bool require_monotone = true;
  /// Monotonicity is enforced only up to this x; above it violations are warnings.
  double monotone_check_hi = std::numeric_limits<double>::infinity();
  /// Relative tolerance for d/dx log_closed == 1/phi on the grid.
  double consistency_tol = 1e-8;

  /// Warnings carried into Deformation::warnings().
  std::vector<std::string> notes;
};

/// A phi-deformation: generator phi with log_phi(x) = int_1^x dy / phi(y) and
/// its inverse exp_phi. Immutable and cheap to copy.
class Deformation {
 public:
  explicit Deformation(DeformationSpec spec);

  const std::string& name() const;
  const std::vector<double>& params() const;

  double phi(double x) const;
  double phi_prime(double x) const;
  /// Analytic when supplied, otherwise a finite difference of phi_prime.
  double phi_second(double x) const;

  double log(double x) const;
  /// Cutoff convention: 0 for y <= lower_limit(); RangeError for y >= upper_limit().
  double exp(double y) const;

  bool has_closed_log() const;
  bool has_closed_exp() const;
  double lower_limit() const;
  double upper_limit() const;
  double domain_lo() const;
  double domain_hi() const;

  /// integral_0^x log_phi, when the family provides it in closed form.
  std::optional<double> naudts_primitive(double x) const;

  /// Non-fatal findings from construction (monotonicity, concavity, ...).
  const std::vector<std::string>& warnings() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

double log_phi(const Deformation& d, double x);
double exp_phi(const Deformation& d, double y);

/// h_phi(p) = sum_i phi(p_i).
double h_phi(const Deformation& d, const ProbVec& p);

/// Escort distribution phi(p_j) / h_phi(p).
ProbVec escort(const Deformation& d, const ProbVec& p);

/// chi = phi / phi'. Its log has the closed form ln(phi(x) / phi(1)).
Deformation chi_dual(const Deformation& d);

/// xi = exp(log_d): generator exp(log_d(x)), log_xi(x) = int_1^x exp(-log_d(y)) dy.
/// Records a warning where xi'' <= xi'^2 / xi fails on the validation grid.
Deformation exp_of_log(const Deformation& d);

/// Tsallis-Souza dual: log^TS = log / (1 + nu log), phi^TS = phi (1 + nu log)^2.
/// PoleError when 1 + nu log vanishes on the working range [1e-9, 1e3].
Deformation ts_dual(const Deformation& d, double nu);

}  // namespace phigeo
