#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "phigeo/deform.hpp"
#include "phigeo/families.hpp"

namespace phigeo {

enum class Chart { simplex_interior, theta };

/// Symmetric metric on either the simplex chart (p_1, ..., p_{n-1}) or the
/// natural parameters theta.
struct MetricMatrix {
  Eigen::MatrixXd entries;
  Chart chart = Chart::simplex_interior;
  std::vector<double> base_point;

  MetricMatrix() = default;
  /// Symmetrizes the input as (M + M^T) / 2.
  MetricMatrix(Eigen::MatrixXd m, Chart chart, std::vector<double> base);

  Eigen::Index dim() const { return entries.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries(i, j); }
  bool positive_definite() const;
  double max_abs() const;
};

/// Residual summary for two quantities that should agree pointwise.
struct DualityReport {
  std::string lhs_label;
  std::string rhs_label;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
  std::vector<std::vector<double>> grid;
  std::vector<double> conformal_factor;

  /// Folds one evaluation point into the maxima. Relative residuals are taken
  /// against max(|lhs|) at that point.
  void add(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, std::vector<double> point);
  void add(double lhs, double rhs, std::vector<double> point);
};

/// g_ij = a_i delta_ij + a_0 on the chart (p_1, ..., p_{n-1}); a has length n.
MetricMatrix diagonal_plus_rank_one(const std::vector<double>& a, const ProbVec& p);

/// Classical Fisher matrix delta_ij / p_i + 1 / p_0.
MetricMatrix fisher_matrix(const ProbVec& p);

// Entropies ---------------------------------------------------------------

/// S^N = -sum_j int_0^{p_j} log_phi. DivergentIntegral when that integral diverges.
double entropy_naudts(const Deformation& d, const ProbVec& p);

/// S^A = -(1/h_phi) sum_j phi(p_j) log_phi(p_j).
double entropy_amari(const Deformation& d, const ProbVec& p);

/// sum_i (phi(p_i) - p_i) / nu.
double entropy_from_phi_nu(const Deformation& d, double nu, const ProbVec& p);

// Divergences -------------------------------------------------------------

double divergence_naudts(const Deformation& d, const ProbVec& p, const ProbVec& q);
double divergence_amari(const Deformation& d, const ProbVec& p, const ProbVec& q);
double divergence_csiszar(const std::function<double(double)>& f, const ProbVec& p, const ProbVec& q);

using SimplexFn = std::function<double(const ProbVec&)>;
using SimplexGrad = std::function<Eigen::VectorXd(const ProbVec&)>;

/// F(p) - F(q) - <grad F(q), p - q> over all n coordinates.
double divergence_bregman(const SimplexFn& F, const SimplexGrad& grad_F, const ProbVec& p, const ProbVec& q);

/// F(p) = sum_i (int_1^{p_i} log_phi + 1 - p_i) and its gradient log_phi(p_i) - 1.
/// The Bregman divergence of this pair is divergence_naudts.
std::pair<SimplexFn, SimplexGrad> naudts_potential(const Deformation& d);

using Divergence = std::function<double(const ProbVec&, const ProbVec&)>;

// Metrics -----------------------------------------------------------------

/// delta_ij / phi(p_i) + 1 / phi(p_0).
MetricMatrix metric_naudts(const Deformation& d, const ProbVec& p);

/// (1/h_phi) (phi'(p_i)/phi(p_i) delta_ij + phi'(p_0)/phi(p_0)).
MetricMatrix metric_amari(const Deformation& d, const ProbVec& p);

/// Hessian of delta -> div(p, p + delta) at delta = 0, with q_0 = p_0 - sum(delta).
MetricMatrix metric_fd_oracle(const Divergence& div, const ProbVec& p);

/// T(g) = -N_g (log g)' applied to g = 1/phi with N_g = 1 / h_phi(p).
MetricMatrix t_operator(const Deformation& d, const ProbVec& p);

/// g(x) / (1 + nu int_1^x g)^2 with g = 1/phi, the integral done by quadrature.
/// PoleError when 1 + nu log_phi vanishes on [1e-9, 1e3].
MetricMatrix ts_metric_transform(const Deformation& d_ht, double nu, const ProbVec& p);

/// g^N of chi against h_xi(p) g^A of xi = exp(log_chi). Records h_xi as the
/// conformal factor.
DualityReport conformal_check(const Deformation& chi, const ProbVec& p);

// (c,d) closed forms --------------------------------------------------------

/// r A^{-d} e^A sum_i Gamma(1 + d, A - c ln p_i) - r c. Generic branch only.
double cd_entropy_closed(const CdParams& params, const ProbVec& p);

struct CdEntropyComparison {
  double closed = 0.0;
  double quadrature = 0.0;
  /// closed / quadrature at the uniform distribution of the same size.
  double scale = 0.0;
  /// closed - quadrature at the uniform distribution.
  double offset = 0.0;
  double residual_scaled = 0.0;  ///< |closed - scale * quadrature|
  double residual_offset = 0.0;  ///< |closed - (quadrature + offset)|
};

/// Compares the closed form against entropy_naudts(cd_family(params), p)
/// after fitting a single constant at the uniform point, both ways.
CdEntropyComparison cd_entropy_compare(const CdParams& params, const ProbVec& p);

struct CdMetrics {
  MetricMatrix naudts;
  MetricMatrix amari;
  /// Closed Naudts form vs metric_naudts(cd_family(params)).
  DualityReport naudts_check;
  /// Closed Amari form vs h_phi * metric_amari(cd_family(params)).
  DualityReport amari_check;
  /// Closed Amari form vs metric_amari without the h_phi factor.
  double amari_raw_residual = 0.0;
  /// Naudts form with log(p_i) in the p_0 term, as typeset.
  double naudts_typeset_residual = 0.0;
};

/// Closed-form (c,d) metrics. Shannon branch gives Fisher for both; d = 0 uses
/// 1/phi for the Naudts side and (2 - c)(delta_ij/p_i + 1/p_0) for the Amari side.
CdMetrics cd_metrics_closed(const CdParams& params, const ProbVec& p);

}  // namespace phigeo
