#pragma once

#include <Eigen/Core>

#include "phigeo/geometry.hpp"
#include "phigeo/maxent.hpp"

namespace phigeo {

/// Estimator values per state: c(i, k) is component k evaluated at state i.
class Estimator {
 public:
  explicit Estimator(Eigen::MatrixXd c);
  /// c = E, the configuration variables themselves.
  static Estimator from_config(const ConfigMatrix& E);

  const Eigen::MatrixXd& values() const { return c_; }

 private:
  Eigen::MatrixXd c_;
};

struct CRReport {
  double lhs = 0.0;       ///< Cov_P(c_k, c_l) / f_second^2
  double rhs = 0.0;       ///< 1 / I_kl(P)
  double slack = 0.0;     ///< lhs - rhs
  bool equality = false;  ///< |slack| < tolerance
  double f_second = 0.0;  ///< d<c_k>_p / d theta_l, analytic
  double f_second_fd = 0.0;
  double covariance = 0.0;
  double fisher = 0.0;
};

/// n x m matrix d p_i / d theta_j = phi(p_i) (E_ij - eta_j).
Eigen::MatrixXd dp_dtheta(const PhiExpFamily& fam);

/// I_kl = sum_i (1/P_i) dp_i/dtheta_k dp_i/dtheta_l on the theta chart.
MetricMatrix fisher_general(const PhiExpFamily& fam, const ProbVec& P);

/// max_k |sum_i dp_i / dtheta_k|.
double regularity_check(const PhiExpFamily& fam, const ProbVec& P);

CRReport cr_report(const PhiExpFamily& fam, const ProbVec& P, const Estimator& est, Eigen::Index k, Eigen::Index l,
                   double equality_tol = 1e-8);

/// J^T g J for a simplex-chart metric g and the Jacobian J = dp_dtheta with
/// the dependent row p_0 dropped.
MetricMatrix pullback(const MetricMatrix& g, const Eigen::MatrixXd& J);

/// fisher_general at P = escort(pmf) against h_phi * pullback(g^N).
DualityReport naudts_identity_check(const PhiExpFamily& fam);

/// With xi = exp(log_phi): fisher_general(escort_phi(pmf)) / h_phi against
/// h_xi * pullback(g^A_xi).
DualityReport amari_identity_check(const PhiExpFamily& fam);

/// Same right-hand side, but the left side uses P = escort_xi(pmf) without
/// the 1/h_phi factor. Reported, not asserted.
DualityReport amari_identity_literal(const PhiExpFamily& fam);

}  // namespace phigeo
