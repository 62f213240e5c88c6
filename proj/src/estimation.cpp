#include "phigeo/estimation.hpp"

#include <cmath>
#include <string>

#include "phigeo/error.hpp"

namespace phigeo {

Estimator::Estimator(Eigen::MatrixXd c) : c_(std::move(c)) {
  if (c_.size() == 0 || !c_.allFinite()) throw DomainError("Estimator: entries must be finite and non-empty");
}

Estimator Estimator::from_config(const ConfigMatrix& E) { return Estimator(E.matrix()); }

Eigen::MatrixXd dp_dtheta(const PhiExpFamily& fam) {
  fam.pmf().require_interior("dp_dtheta");
  const Eigen::VectorXd eta = eta_coords(fam);
  const auto& E = fam.config().matrix();
  Eigen::MatrixXd J(E.rows(), E.cols());
  for (Eigen::Index i = 0; i < E.rows(); ++i)
    J.row(i) = fam.deformation().phi(fam.pmf()[static_cast<std::size_t>(i)]) * (E.row(i) - eta.transpose());
  return J;
}

MetricMatrix fisher_general(const PhiExpFamily& fam, const ProbVec& P) {
  P.require_interior("fisher_general");
  if (P.size() != fam.pmf().size()) throw DomainError("fisher_general: P has the wrong number of states");
  const Eigen::MatrixXd J = dp_dtheta(fam);
  Eigen::MatrixXd I = Eigen::MatrixXd::Zero(J.cols(), J.cols());
  for (Eigen::Index i = 0; i < J.rows(); ++i)
    I += J.row(i).transpose() * J.row(i) / P[static_cast<std::size_t>(i)];
  return MetricMatrix(std::move(I), Chart::theta, std::vector<double>(fam.theta().data(), fam.theta().data() + fam.theta().size()));
}

double regularity_check(const PhiExpFamily& fam, const ProbVec& P) {
  P.require_interior("regularity_check");
  return dp_dtheta(fam).colwise().sum().cwiseAbs().maxCoeff();
}

CRReport cr_report(const PhiExpFamily& fam, const ProbVec& P, const Estimator& est, Eigen::Index k, Eigen::Index l,
                   double equality_tol) {
  const Eigen::MatrixXd& c = est.values();
  const auto m = fam.theta().size();
  if (c.rows() != static_cast<Eigen::Index>(P.size())) throw DomainError("cr_report: estimator has the wrong number of states");
  if (k < 0 || l < 0 || k >= c.cols() || l >= c.cols() || k >= m || l >= m) throw DomainError("cr_report: index out of range");
  if (regularity_check(fam, P) > 1e-9) throw DomainError("cr_report: regularity condition fails");

  const Eigen::Map<const Eigen::VectorXd> Pv(P.probs().data(), static_cast<Eigen::Index>(P.size()));
  const Eigen::MatrixXd J = dp_dtheta(fam);

  CRReport out;
  const double mk = Pv.dot(c.col(k));
  const double ml = Pv.dot(c.col(l));
  out.covariance = Pv.dot(c.col(k).cwiseProduct(c.col(l))) - mk * ml;
  out.f_second = c.col(k).dot(J.col(l));

  const auto& d = fam.deformation();
  const auto& E = fam.config();
  const Eigen::VectorXd theta = fam.theta();
  const Eigen::VectorXd ck = c.col(k);
  out.f_second_fd = specfun::derivative(
      [&](double t) {
        Eigen::VectorXd th = theta;
        th(l) += t;
        const PhiExpFamily f = normalize(d, E, th);
        const Eigen::Map<const Eigen::VectorXd> p(f.pmf().probs().data(), static_cast<Eigen::Index>(f.pmf().size()));
        return ck.dot(p);
      },
      0.0);

  if (out.f_second == 0.0) throw DomainError("cr_report: d<c_k>/d theta_l vanishes");
  out.fisher = fisher_general(fam, P)(k, l);
  if (out.fisher == 0.0) throw DomainError("cr_report: I_kl vanishes");
  out.lhs = out.covariance / (out.f_second * out.f_second);
  out.rhs = 1.0 / out.fisher;
  out.slack = out.lhs - out.rhs;
  out.equality = std::abs(out.slack) < equality_tol;
  return out;
}

MetricMatrix pullback(const MetricMatrix& g, const Eigen::MatrixXd& J) {
  if (g.chart != Chart::simplex_interior) throw DomainError("pullback: metric must live on the simplex chart");
  if (J.rows() != g.dim() + 1) throw DomainError("pullback: Jacobian rows must be n = dim + 1");
  const Eigen::MatrixXd Jind = J.bottomRows(J.rows() - 1);
  return MetricMatrix(Jind.transpose() * g.entries * Jind, Chart::theta, {});
}

DualityReport naudts_identity_check(const PhiExpFamily& fam) {
  const auto& d = fam.deformation();
  const ProbVec& p = fam.pmf();
  const MetricMatrix I = fisher_general(fam, escort(d, p));
  const MetricMatrix G = pullback(metric_naudts(d, p), dp_dtheta(fam));
  const double h = h_phi(d, p);
  DualityReport rep;
  rep.lhs_label = "I[P = escort]";
  rep.rhs_label = "h_phi * J^T g^N J";
  rep.add(I.entries, h * G.entries, p.probs());
  rep.conformal_factor.push_back(h);
  return rep;
}

namespace {

DualityReport amari_side(const PhiExpFamily& fam, bool literal) {
  const auto& d = fam.deformation();
  const ProbVec& p = fam.pmf();
  const Deformation xi = exp_of_log(d);
  const double h_xi = h_phi(xi, p);
  const MetricMatrix G = pullback(metric_amari(xi, p), dp_dtheta(fam));
  DualityReport rep;
  rep.rhs_label = "h_xi * J^T g^A_xi J";
  Eigen::MatrixXd lhs;
  if (literal) {
    rep.lhs_label = "I[P = escort_xi]";
    lhs = fisher_general(fam, escort(xi, p)).entries;
  } else {
    rep.lhs_label = "I[P = escort_phi] / h_phi";
    lhs = fisher_general(fam, escort(d, p)).entries / h_phi(d, p);
  }
  rep.add(lhs, h_xi * G.entries, p.probs());
  rep.conformal_factor.push_back(h_xi);
  return rep;
}

}  // namespace

DualityReport amari_identity_check(const PhiExpFamily& fam) { return amari_side(fam, false); }

DualityReport amari_identity_literal(const PhiExpFamily& fam) { return amari_side(fam, true); }

}  // namespace phigeo
