#pragma once

#include <optional>

#include "phigeo/deform.hpp"
#include "phigeo/specfun.hpp"

namespace phigeo {

/// phi(x) = x: Shannon / Kullback-Leibler.
Deformation identity();

/// phi(x) = x^q, q > 0, q != 1.
Deformation tsallis(double q);

/// Stretched exponentials: log_phi(x) = sign(ln x) |ln x|^(1/eta), eta > 0, eta != 1.
/// The generator x eta |ln x|^(1 - 1/eta) is singular at x = 1, so validation
/// runs on the probability range (0, 1) and monotonicity failures are warnings.
Deformation stretched(double eta);

enum class CdBranch { generic, d_zero, c_one, shannon };

const char* to_string(CdBranch b);

/// (c, d, r) with the derived Lambert-W constants. A and B are NaN off the
/// generic branch.
struct CdParams {
  double c = 1.0;
  double d = 1.0;
  double r = 1.0;
  double A = 0.0;  ///< c d r / (1 - (1 - c) r)
  double B = 0.0;  ///< k e^k with k = (1 - c) r / (1 - (1 - c) r)
  CdBranch branch = CdBranch::shannon;

  /// Coefficient a = (1 - (1 - c) r) / (d r) of ln x inside the bracket.
  double bracket_coeff() const;
  /// k = (1 - c) r / (1 - (1 - c) r); W(B) = k on the selected branch.
  double lambert_k() const;

  /// Validates c in (0, 1.5], d in [-2, 3], r > 0 and classifies the branch.
  static CdParams make(double c, double d, std::optional<double> r = std::nullopt);
};

/// r = 1 / (1 - c + c d) for d >= 0, r = exp(-d) / (1 - c) for d < 0.
double auto_r(double c, double d);

/// The (c,d)-deformation. phi is 1 / (d log / dx) of the closed-form log.
Deformation cd_family(double c, double d, std::optional<double> r = std::nullopt);
Deformation cd_family(const CdParams& params);

/// The generator as printed alongside the (c,d)-logarithm, for cross-checking
/// against 1 / log'. Generic branch only.
double cd_phi_printed(const CdParams& params, double x);

struct CdExpResult {
  double value = 0.0;
  bool used_fallback = false;
  specfun::Branch lambert_branch = specfun::Branch::principal;
};

/// Lambert-W form of the (c,d)-exponential. Falls back to bracketed inversion
/// of the closed-form log when the Lambert argument leaves its domain.
CdExpResult cd_exp_closed(const CdParams& params, double y);

/// Branch of W on which W(B) = k, found by a round-trip probe.
specfun::Branch cd_lambert_branch(const CdParams& params);

}  // namespace phigeo
