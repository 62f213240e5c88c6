#pragma once

#include <Eigen/Core>
#include <vector>

#include "phigeo/deform.hpp"

namespace phigeo {

/// n states x m constraints; row i is the configuration vector E_i.
class ConfigMatrix {
 public:
  /// Requires finite entries, n >= 2, m >= 1 and rank [1, E] = m + 1.
  explicit ConfigMatrix(Eigen::MatrixXd E);
  static ConfigMatrix from_rows(const std::vector<std::vector<double>>& rows);

  Eigen::Index n() const { return E_.rows(); }
  Eigen::Index m() const { return E_.cols(); }
  const Eigen::MatrixXd& matrix() const { return E_; }

 private:
  Eigen::MatrixXd E_;
};

/// p_i(theta) = exp_phi(psi + theta . E_i). The stored psi is the additive
/// normalizer inside exp_phi; massieu() = -psi is the potential whose gradient
/// is the escort moment vector eta.
class PhiExpFamily {
 public:
  PhiExpFamily(Deformation d, ConfigMatrix E, Eigen::VectorXd theta, double psi, ProbVec pmf);

  const Deformation& deformation() const { return d_; }
  const ConfigMatrix& config() const { return E_; }
  const Eigen::VectorXd& theta() const { return theta_; }
  double psi() const { return psi_; }
  double massieu() const { return -psi_; }
  const ProbVec& pmf() const { return pmf_; }

 private:
  Deformation d_;
  ConfigMatrix E_;
  Eigen::VectorXd theta_;
  double psi_;
  ProbVec pmf_;
};

/// Solves sum_i exp_phi(psi + theta . E_i) = 1 for psi by Brent's method.
PhiExpFamily normalize(const Deformation& d, const ConfigMatrix& E, const Eigen::VectorXd& theta);

struct PsiForms {
  double psi_root = 0.0;
  /// <log_phi p> - theta . <E>
  double psi_linear = 0.0;
  /// <log_phi p>_phi - theta . <E>_phi
  double psi_escort = 0.0;
  /// -sum_i phi(p_i), reported only.
  double minus_sum_phi = 0.0;
};

PsiForms psi_forms(const PhiExpFamily& fam);

/// eta = E^T escort(pmf).
Eigen::VectorXd eta_coords(const PhiExpFamily& fam);

/// Linear moments E^T pmf.
Eigen::VectorXd linear_moments(const PhiExpFamily& fam);

struct VarphiDual {
  /// eta . theta - massieu
  double legendre_value = 0.0;
  /// sum_j P_j log_phi(p_j) = -entropy_amari
  double escort_average_value = 0.0;
};

VarphiDual varphi_dual(const PhiExpFamily& fam);

struct FitOptions {
  double tol = 1e-12;
  int max_iter = 200;
};

/// theta with E^T pmf = targets. InfeasibleTarget outside the hull of the rows
/// of E, NonConvergence when damped Newton stalls.
PhiExpFamily fit_linear_moments(const Deformation& d, const ConfigMatrix& E, const Eigen::VectorXd& targets,
                                const FitOptions& opt = {});

/// theta with E^T escort(pmf) = targets.
PhiExpFamily fit_escort_moments(const Deformation& d, const ConfigMatrix& E, const Eigen::VectorXd& targets,
                                const FitOptions& opt = {});

/// True when targets lie strictly inside the convex hull of the rows of E.
bool strictly_inside_hull(const ConfigMatrix& E, const Eigen::VectorXd& targets);

}  // namespace phigeo
