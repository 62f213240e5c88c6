#include "phigeo/maxent.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "phigeo/error.hpp"

namespace phigeo {

ConfigMatrix::ConfigMatrix(Eigen::MatrixXd E) : E_(std::move(E)) {
  if (E_.rows() < 2 || E_.cols() < 1) throw DomainError("ConfigMatrix: need n >= 2 states and m >= 1 constraints");
  if (!E_.allFinite()) throw DomainError("ConfigMatrix: entries must be finite");
  Eigen::MatrixXd aug(E_.rows(), E_.cols() + 1);
  aug.col(0).setOnes();
  aug.rightCols(E_.cols()) = E_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(aug);
  if (qr.rank() != aug.cols())
    throw DomainError("ConfigMatrix: columns of E together with the ones vector are linearly dependent");
}

ConfigMatrix ConfigMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw DomainError("ConfigMatrix: empty configuration");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd E(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != m) throw DomainError("ConfigMatrix: ragged rows");
    for (Eigen::Index j = 0; j < m; ++j) E(i, j) = row[static_cast<std::size_t>(j)];
  }
  return ConfigMatrix(std::move(E));
}

PhiExpFamily::PhiExpFamily(Deformation d, ConfigMatrix E, Eigen::VectorXd theta, double psi, ProbVec pmf)
    : d_(std::move(d)), E_(std::move(E)), theta_(std::move(theta)), psi_(psi), pmf_(std::move(pmf)) {}

PhiExpFamily normalize(const Deformation& d, const ConfigMatrix& E, const Eigen::VectorXd& theta) {
  if (theta.size() != E.m()) throw DomainError("normalize: theta has the wrong length");
  if (!theta.allFinite()) throw DomainError("normalize: theta must be finite");
  const Eigen::VectorXd s = E.matrix() * theta;
  const auto n = E.n();
  auto total = [&](double psi) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += d.exp(psi + s(i));
    return acc - 1.0;
  };
  // At hi the largest state sits at exp_phi(0) = 1; at lo every state is at most 1/n.
  const double hi = -s.maxCoeff();
  const double lo = d.log(1.0 / static_cast<double>(n)) - s.maxCoeff();
  double psi;
  try {
    psi = specfun::find_root(total, lo, hi, {1e-16, 1e-15, 500});
  } catch (const DomainError& e) {
    throw DomainError(std::string("normalize: no normalizing psi: ") + e.what());
  }
  std::vector<double> p(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    p[static_cast<std::size_t>(i)] = d.exp(psi + s(i));
    sum += p[static_cast<std::size_t>(i)];
  }
  if (std::abs(sum - 1.0) > 1e-10) throw NonConvergence("normalize: sum of exp_phi is " + std::to_string(sum));
  for (double& v : p) v /= sum;
  return PhiExpFamily(d, E, theta, psi, ProbVec(std::move(p)));
}

namespace {

Eigen::VectorXd as_vector(const ProbVec& p) {
  return Eigen::Map<const Eigen::VectorXd>(p.probs().data(), static_cast<Eigen::Index>(p.size()));
}

// d p_i / d theta_j = phi(p_i) (E_ij - eta_j)
Eigen::MatrixXd dp(const PhiExpFamily& fam, const Eigen::VectorXd& eta) {
  const auto& E = fam.config().matrix();
  Eigen::MatrixXd J(E.rows(), E.cols());
  for (Eigen::Index i = 0; i < E.rows(); ++i) {
    const double pi = fam.pmf()[static_cast<std::size_t>(i)];
    const double w = pi > 0.0 ? fam.deformation().phi(pi) : 0.0;
    J.row(i) = w * (E.row(i) - eta.transpose());
  }
  return J;
}

Eigen::VectorXd escort_vector(const PhiExpFamily& fam) {
  const auto& p = fam.pmf();
  Eigen::VectorXd w(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i)
    w(static_cast<Eigen::Index>(i)) = p[i] > 0.0 ? fam.deformation().phi(p[i]) : 0.0;
  return w / w.sum();
}

}  // namespace

PsiForms psi_forms(const PhiExpFamily& fam) {
  const auto& p = fam.pmf();
  p.require_interior("psi_forms");
  const auto& d = fam.deformation();
  const Eigen::VectorXd pv = as_vector(p);
  const Eigen::VectorXd P = as_vector(escort(d, p));
  Eigen::VectorXd L(pv.size());
  double sum_phi = 0.0;
  for (Eigen::Index i = 0; i < pv.size(); ++i) {
    L(i) = d.log(pv(i));
    sum_phi += d.phi(pv(i));
  }
  const auto& E = fam.config().matrix();
  PsiForms out;
  out.psi_root = fam.psi();
  out.psi_linear = pv.dot(L) - fam.theta().dot(E.transpose() * pv);
  out.psi_escort = P.dot(L) - fam.theta().dot(E.transpose() * P);
  out.minus_sum_phi = -sum_phi;
  return out;
}

Eigen::VectorXd eta_coords(const PhiExpFamily& fam) {
  fam.pmf().require_interior("eta_coords");
  return fam.config().matrix().transpose() * as_vector(escort(fam.deformation(), fam.pmf()));
}

Eigen::VectorXd linear_moments(const PhiExpFamily& fam) {
  return fam.config().matrix().transpose() * as_vector(fam.pmf());
}

VarphiDual varphi_dual(const PhiExpFamily& fam) {
  fam.pmf().require_interior("varphi_dual");
  const auto& d = fam.deformation();
  const Eigen::VectorXd eta = eta_coords(fam);
  const Eigen::VectorXd P = as_vector(escort(d, fam.pmf()));
  VarphiDual out;
  out.legendre_value = eta.dot(fam.theta()) - fam.massieu();
  for (std::size_t i = 0; i < fam.pmf().size(); ++i)
    out.escort_average_value += P(static_cast<Eigen::Index>(i)) * d.log(fam.pmf()[i]);
  return out;
}

bool strictly_inside_hull(const ConfigMatrix& E, const Eigen::VectorXd& targets) {
  if (targets.size() != E.m()) throw DomainError("targets have the wrong length");
  if (!targets.allFinite()) return false;
  // Minimize F(theta) = log sum_i exp(theta . (E_i - t)). The weights at the
  // minimizer are the max-entropy distribution with mean t; its smallest entry
  // tends to 0 as t approaches the boundary of the hull.
  const Eigen::MatrixXd D = E.matrix().rowwise() - targets.transpose();
  auto eval = [&](const Eigen::VectorXd& th, Eigen::VectorXd* w) {
    const Eigen::VectorXd z = D * th;
    const double zmax = z.maxCoeff();
    const Eigen::VectorXd e = (z.array() - zmax).exp().matrix();
    const double s = e.sum();
    if (w) *w = e / s;
    return zmax + std::log(s);
  };
  Eigen::VectorXd th = Eigen::VectorXd::Zero(E.m());
  Eigen::VectorXd w;
  double F = eval(th, &w);
  const double scale = std::max(1.0, D.cwiseAbs().maxCoeff());
  for (int it = 0; it < 500; ++it) {
    const Eigen::VectorXd g = D.transpose() * w;
    if (g.lpNorm<Eigen::Infinity>() <= 1e-11 * scale) return w.minCoeff() > 1e-9;
    const Eigen::MatrixXd H = D.transpose() * w.asDiagonal() * D - g * g.transpose();
    Eigen::VectorXd step = -H.ldlt().solve(g);
    if (!step.allFinite() || step.dot(g) >= 0.0) step = -g;
    double a = 1.0;
    bool moved = false;
    for (int k = 0; k < 60; ++k, a *= 0.5) {
      const Eigen::VectorXd cand = th + a * step;
      Eigen::VectorXd wc;
      const double Fc = eval(cand, &wc);
      if (Fc <= F + 1e-4 * a * step.dot(g)) {
        th = cand;
        F = Fc;
        w = wc;
        moved = true;
        break;
      }
    }
    if (!moved || th.norm() > 1e4) return false;
  }
  return false;
}

namespace {

enum class Moments { linear, escort };

Eigen::VectorXd moments(const PhiExpFamily& fam, Moments kind) {
  const auto& E = fam.config().matrix();
  if (kind == Moments::linear) return E.transpose() * as_vector(fam.pmf());
  return E.transpose() * escort_vector(fam);
}

Eigen::MatrixXd moment_jacobian(const PhiExpFamily& fam, Moments kind) {
  const auto& E = fam.config().matrix();
  const Eigen::VectorXd P = escort_vector(fam);
  const Eigen::VectorXd eta = E.transpose() * P;
  const Eigen::MatrixXd J = dp(fam, eta);
  if (kind == Moments::linear) return E.transpose() * J;
  const auto& d = fam.deformation();
  const auto n = E.rows();
  Eigen::VectorXd phi(n), dphi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pi = fam.pmf()[static_cast<std::size_t>(i)];
    phi(i) = pi > 0.0 ? d.phi(pi) : 0.0;
    dphi(i) = pi > 0.0 ? d.phi_prime(pi) : 0.0;
  }
  const double h = phi.sum();
  const Eigen::RowVectorXd dh = dphi.transpose() * J;
  Eigen::MatrixXd dP(n, E.cols());
  for (Eigen::Index i = 0; i < n; ++i) dP.row(i) = (dphi(i) * J.row(i) * h - phi(i) * dh) / (h * h);
  return E.transpose() * dP;
}

PhiExpFamily fit(const Deformation& d, const ConfigMatrix& E, const Eigen::VectorXd& targets, const FitOptions& opt,
                 Moments kind) {
  if (targets.size() != E.m()) throw DomainError("fit: targets have the wrong length");
  if (!strictly_inside_hull(E, targets))
    throw InfeasibleTarget("fit: targets are not strictly inside the convex hull of the configurations");
  const double scale = std::max(1.0, targets.lpNorm<Eigen::Infinity>());
  PhiExpFamily fam = normalize(d, E, Eigen::VectorXd::Zero(E.m()));
  Eigen::VectorXd r = moments(fam, kind) - targets;
  double rn = r.norm();
  for (int it = 0; it < opt.max_iter; ++it) {
    if (r.lpNorm<Eigen::Infinity>() <= opt.tol * scale) return fam;
    const Eigen::MatrixXd J = moment_jacobian(fam, kind);
    Eigen::VectorXd step = J.fullPivLu().solve(-r);
    if (!step.allFinite()) throw NonConvergence("fit: singular moment Jacobian");
    bool accepted = false;
    double a = 1.0;
    for (int k = 0; k < 60; ++k, a *= 0.5) {
      try {
        PhiExpFamily cand = normalize(d, E, fam.theta() + a * step);
        const Eigen::VectorXd rc = moments(cand, kind) - targets;
        if (rc.allFinite() && rc.norm() < rn) {
          fam = std::move(cand);
          r = rc;
          rn = rc.norm();
          accepted = true;
          break;
        }
      } catch (const DomainError&) {
      } catch (const RangeError&) {
      }
    }
    if (!accepted) break;
  }
  if (r.lpNorm<Eigen::Infinity>() <= std::max(opt.tol * scale, 1e-10 * scale)) return fam;
  throw NonConvergence("fit: damped Newton stopped with moment residual " + std::to_string(r.lpNorm<Eigen::Infinity>()));
}

}  // namespace

PhiExpFamily fit_linear_moments(const Deformation& d, const ConfigMatrix& E, const Eigen::VectorXd& targets,
                                const FitOptions& opt) {
  return fit(d, E, targets, opt, Moments::linear);
}

PhiExpFamily fit_escort_moments(const Deformation& d, const ConfigMatrix& E, const Eigen::VectorXd& targets,
                                const FitOptions& opt) {
  return fit(d, E, targets, opt, Moments::escort);
}

}  // namespace phigeo
