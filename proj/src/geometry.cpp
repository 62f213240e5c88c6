#include "phigeo/geometry.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "phigeo/error.hpp"

namespace phigeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_size(const ProbVec& p, const ProbVec& q, const char* who) {
  if (p.size() != q.size()) throw DomainError(std::string(who) + ": size mismatch");
}

double phi_interior(const Deformation& d, double x, const char* who) {
  const double v = d.phi(x);
  if (!(v > 0.0) || !std::isfinite(v))
    throw BoundaryError(std::string(who) + ": phi is not finite-positive at " + std::to_string(x));
  return v;
}

// int_0^x log_phi, closed form if available.
double naudts_integral(const Deformation& d, double x) {
  if (x == 0.0) return 0.0;
  if (auto v = d.naudts_primitive(x)) return *v;
  const auto log = [&d](double t) { return d.log(t); };
  try {
    double v;
    if (d.domain_lo() > 0.0)
      v = specfun::integrate(log, d.domain_lo(), x, {1e-13, 1e-11, 4000});
    else
      v = specfun::integrate_from_zero(log, x, {1e-13, 1e-11, 4000});
    if (!std::isfinite(v)) throw DivergentIntegral("entropy_naudts: integral of log_phi over (0, p] diverges");
    return v;
  } catch (const NonConvergence&) {
    throw DivergentIntegral("entropy_naudts: integral of log_phi over (0, p] diverges for " + d.name());
  }
}

}  // namespace

MetricMatrix::MetricMatrix(Eigen::MatrixXd m, Chart c, std::vector<double> base)
    : entries(0.5 * (m + m.transpose())), chart(c), base_point(std::move(base)) {}

bool MetricMatrix::positive_definite() const {
  if (entries.size() == 0) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(entries);
  return llt.info() == Eigen::Success;
}

double MetricMatrix::max_abs() const { return entries.cwiseAbs().maxCoeff(); }

void DualityReport::add(const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, std::vector<double> point) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) throw DomainError("DualityReport: shape mismatch");
  const double diff = (lhs - rhs).cwiseAbs().maxCoeff();
  const double scale = std::max(lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff());
  max_abs_residual = std::max(max_abs_residual, diff);
  if (scale > 0.0) max_rel_residual = std::max(max_rel_residual, diff / scale);
  if (!std::isfinite(diff)) {
    max_abs_residual = kInf;
    max_rel_residual = kInf;
  }
  grid.push_back(std::move(point));
}

void DualityReport::add(double lhs, double rhs, std::vector<double> point) {
  Eigen::MatrixXd a(1, 1), b(1, 1);
  a(0, 0) = lhs;
  b(0, 0) = rhs;
  add(a, b, std::move(point));
}

MetricMatrix diagonal_plus_rank_one(const std::vector<double>& a, const ProbVec& p) {
  const auto n = static_cast<Eigen::Index>(a.size());
  if (n < 2 || a.size() != p.size()) throw DomainError("diagonal_plus_rank_one: need n >= 2 weights matching p");
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n - 1, n - 1, a[0]);
  for (Eigen::Index i = 1; i < n; ++i) m(i - 1, i - 1) += a[static_cast<std::size_t>(i)];
  return MetricMatrix(std::move(m), Chart::simplex_interior, p.probs());
}

MetricMatrix fisher_matrix(const ProbVec& p) {
  p.require_interior("fisher_matrix");
  std::vector<double> a(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) a[i] = 1.0 / p[i];
  return diagonal_plus_rank_one(a, p);
}

// ---------------------------------------------------------------------------

double entropy_naudts(const Deformation& d, const ProbVec& p) {
  double s = 0.0;
  for (double v : p.probs()) s -= naudts_integral(d, v);
  return s;
}

double entropy_amari(const Deformation& d, const ProbVec& p) {
  p.require_interior("entropy_amari");
  const double h = h_phi(d, p);
  double s = 0.0;
  for (double v : p.probs()) s += d.phi(v) * d.log(v);
  return -s / h;
}

double entropy_from_phi_nu(const Deformation& d, double nu, const ProbVec& p) {
  if (nu == 0.0) throw DomainError("entropy_from_phi_nu: nu must be nonzero");
  p.require_interior("entropy_from_phi_nu");
  double s = 0.0;
  for (double v : p.probs()) s += d.phi(v) - v;
  return s / nu;
}

double divergence_naudts(const Deformation& d, const ProbVec& p, const ProbVec& q) {
  require_same_size(p, q, "divergence_naudts");
  p.require_interior("divergence_naudts");
  q.require_interior("divergence_naudts");
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double lq = d.log(q[j]);
    s += specfun::integrate([&](double x) { return d.log(x) - lq; }, q[j], p[j], {1e-16, 1e-12, 2000});
  }
  return s;
}

double divergence_amari(const Deformation& d, const ProbVec& p, const ProbVec& q) {
  require_same_size(p, q, "divergence_amari");
  p.require_interior("divergence_amari");
  q.require_interior("divergence_amari");
  const double h = h_phi(d, p);
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) s += d.phi(p[j]) * (d.log(p[j]) - d.log(q[j]));
  return s / h;
}

double divergence_csiszar(const std::function<double(double)>& f, const ProbVec& p, const ProbVec& q) {
  require_same_size(p, q, "divergence_csiszar");
  q.require_interior("divergence_csiszar");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += q[i] * f(p[i] / q[i]);
  return s;
}

double divergence_bregman(const SimplexFn& F, const SimplexGrad& grad_F, const ProbVec& p, const ProbVec& q) {
  require_same_size(p, q, "divergence_bregman");
  const Eigen::VectorXd g = grad_F(q);
  if (static_cast<std::size_t>(g.size()) != p.size()) throw DomainError("divergence_bregman: gradient size mismatch");
  double inner = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) inner += g(static_cast<Eigen::Index>(i)) * (p[i] - q[i]);
  return F(p) - F(q) - inner;
}

std::pair<SimplexFn, SimplexGrad> naudts_potential(const Deformation& d) {
  SimplexFn F = [d](const ProbVec& p) {
    double s = 0.0;
    for (double v : p.probs())
      s += specfun::integrate([&d](double x) { return d.log(x); }, 1.0, v, {1e-16, 1e-12, 2000}) + 1.0 - v;
    return s;
  };
  SimplexGrad G = [d](const ProbVec& p) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) g(static_cast<Eigen::Index>(i)) = d.log(p[i]) - 1.0;
    return g;
  };
  return {F, G};
}

// ---------------------------------------------------------------------------

MetricMatrix metric_naudts(const Deformation& d, const ProbVec& p) {
  p.require_interior("metric_naudts");
  std::vector<double> a(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) a[i] = 1.0 / phi_interior(d, p[i], "metric_naudts");
  return diagonal_plus_rank_one(a, p);
}

MetricMatrix metric_amari(const Deformation& d, const ProbVec& p) {
  p.require_interior("metric_amari");
  const double h = h_phi(d, p);
  std::vector<double> a(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    a[i] = d.phi_prime(p[i]) / phi_interior(d, p[i], "metric_amari") / h;
  return diagonal_plus_rank_one(a, p);
}

MetricMatrix metric_fd_oracle(const Divergence& div, const ProbVec& p) {
  p.require_interior("metric_fd_oracle");
  const auto n = p.size();
  auto f = [&](const Eigen::VectorXd& delta) {
    std::vector<double> q(p.probs());
    double shift = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      q[i] += delta(static_cast<Eigen::Index>(i - 1));
      shift += delta(static_cast<Eigen::Index>(i - 1));
    }
    q[0] -= shift;
    for (double v : q)
      if (!(v > 0.0)) throw EvaluationError("metric_fd_oracle: stencil left the simplex");
    return div(p, ProbVec(std::move(q)));
  };
  Eigen::MatrixXd hess = specfun::hessian(f, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n - 1)));
  return MetricMatrix(std::move(hess), Chart::simplex_interior, p.probs());
}

MetricMatrix t_operator(const Deformation& d, const ProbVec& p) {
  p.require_interior("t_operator");
  const double n_g = 1.0 / h_phi(d, p);
  std::vector<double> a(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p[i];
    const double phi = phi_interior(d, x, "t_operator");
    // g = 1/phi, (log g)' = -phi'/phi
    const double dlog_g = -d.phi_prime(x) / phi;
    a[i] = -n_g * dlog_g;
  }
  return diagonal_plus_rank_one(a, p);
}

MetricMatrix ts_metric_transform(const Deformation& d_ht, double nu, const ProbVec& p) {
  p.require_interior("ts_metric_transform");
  if (nu != 0.0) {
    const double pole_log = -1.0 / nu;
    if (pole_log > d_ht.lower_limit() && pole_log < d_ht.upper_limit()) {
      const double x_pole = d_ht.exp(pole_log);
      if (x_pole >= 1e-9 && x_pole <= 1e3)
        throw PoleError("ts_metric_transform: 1 + nu log vanishes at x = " + std::to_string(x_pole));
    }
  }
  const auto g = [&d_ht](double x) { return 1.0 / d_ht.phi(x); };
  std::vector<double> a(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p[i];
    const double integral = specfun::integrate(g, 1.0, x, {1e-16, 1e-13, 2000});
    const double f = 1.0 + nu * integral;
    if (!(f > 0.0)) throw PoleError("ts_metric_transform: 1 + nu int g is not positive");
    a[i] = g(x) / (f * f);
  }
  return diagonal_plus_rank_one(a, p);
}

DualityReport conformal_check(const Deformation& chi, const ProbVec& p) {
  const Deformation xi = exp_of_log(chi);
  DualityReport rep;
  rep.lhs_label = "g^N[" + chi.name() + "]";
  rep.rhs_label = "h_xi * g^A[" + xi.name() + "]";
  const double omega = h_phi(xi, p);
  const MetricMatrix lhs = metric_naudts(chi, p);
  const MetricMatrix rhs = metric_amari(xi, p);
  rep.add(lhs.entries, omega * rhs.entries, p.probs());
  rep.conformal_factor.push_back(omega);
  return rep;
}

// ---------------------------------------------------------------------------

double cd_entropy_closed(const CdParams& params, const ProbVec& p) {
  if (params.branch != CdBranch::generic || !std::isfinite(params.A))
    throw BranchError("cd_entropy_closed: closed form needs the generic (c,d) branch");
  p.require_interior("cd_entropy_closed");
  const double A = params.A, c = params.c, d = params.d, r = params.r;
  double sum = 0.0;
  for (double v : p.probs()) {
    const double arg = A - c * std::log(v);
    if (!(arg > 0.0)) throw DomainError("cd_entropy_closed: A - c ln p_i must be positive");
    sum += specfun::upper_gamma(1.0 + d, arg);
  }
  return r * std::pow(A, -d) * std::exp(A) * sum - r * c;
}

CdEntropyComparison cd_entropy_compare(const CdParams& params, const ProbVec& p) {
  const Deformation fam = cd_family(params);
  const ProbVec u = ProbVec::uniform(p.size());
  const double closed_u = cd_entropy_closed(params, u);
  const double quad_u = entropy_naudts(fam, u);
  CdEntropyComparison out;
  out.closed = cd_entropy_closed(params, p);
  out.quadrature = entropy_naudts(fam, p);
  out.scale = closed_u / quad_u;
  out.offset = closed_u - quad_u;
  out.residual_scaled = std::abs(out.closed - out.scale * out.quadrature);
  out.residual_offset = std::abs(out.closed - (out.quadrature + out.offset));
  return out;
}

namespace {

// Naudts closed-form weight at x_frac; x_log feeds the log in the numerator.
double cd_naudts_entry(const CdParams& P, double x_log, double x_frac) {
  const double c = P.c, d = P.d, r = P.r;
  const double lx = std::log(x_frac);
  const double ll = std::log(x_log);
  const double bracket = 1.0 - (1.0 - (1.0 - c) * r) / (d * r) * lx;
  const double r_minus_log = r * std::pow(x_frac, c - 1.0) * std::pow(bracket, d);
  return r_minus_log / x_frac * (((c - 1.0) * ((c - 1.0) * r + 1.0) * ll + d) / ((-c * r + r - 1.0) * lx + d * r));
}

double cd_amari_entry(const CdParams& P, double x) {
  const double c = P.c, d = P.d, r = P.r;
  const double lx = std::log(x);
  const double k = (c - 1.0) * r + 1.0;
  const double t1 = (d - 1.0) * k / (k * lx - d * r);
  const double t2 = ((c - 1.0) * (c - 1.0) * r + c - 1.0) / ((c - 1.0) * d * r - c * d * r + (c - 1.0) * k * lx + d + d * r);
  return (2.0 - c - t1 - t2) / x;
}

}  // namespace

CdMetrics cd_metrics_closed(const CdParams& params, const ProbVec& p) {
  p.require_interior("cd_metrics_closed");
  const Deformation fam = cd_family(params);
  const std::size_t n = p.size();
  CdMetrics out;
  std::vector<double> an(n), aa(n);

  switch (params.branch) {
    case CdBranch::shannon:
      for (std::size_t i = 0; i < n; ++i) an[i] = aa[i] = 1.0 / p[i];
      break;
    case CdBranch::d_zero:
      for (std::size_t i = 0; i < n; ++i) {
        an[i] = 1.0 / fam.phi(p[i]);
        aa[i] = (2.0 - params.c) / p[i];
      }
      break;
    case CdBranch::c_one:
    case CdBranch::generic:
      for (std::size_t i = 0; i < n; ++i) {
        an[i] = cd_naudts_entry(params, p[i], p[i]);
        aa[i] = cd_amari_entry(params, p[i]);
      }
      break;
  }
  out.naudts = diagonal_plus_rank_one(an, p);
  out.amari = diagonal_plus_rank_one(aa, p);

  const MetricMatrix gn = metric_naudts(fam, p);
  const MetricMatrix ga = metric_amari(fam, p);
  const double h = h_phi(fam, p);

  out.naudts_check.lhs_label = "closed g^N";
  out.naudts_check.rhs_label = "g^N[" + fam.name() + "]";
  out.naudts_check.add(out.naudts.entries, gn.entries, p.probs());

  out.amari_check.lhs_label = "closed g^A";
  out.amari_check.rhs_label = "h_phi * g^A[" + fam.name() + "]";
  out.amari_check.add(out.amari.entries, h * ga.entries, p.probs());
  out.amari_check.conformal_factor.push_back(h);

  out.amari_raw_residual = (out.amari.entries - ga.entries).cwiseAbs().maxCoeff();

  if (params.branch == CdBranch::generic || params.branch == CdBranch::c_one) {
    // p_0 term with log(p_i) in its numerator: row-dependent, so not symmetric.
    const auto m = static_cast<Eigen::Index>(n - 1);
    Eigen::MatrixXd typeset(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double pi = p[static_cast<std::size_t>(i + 1)];
      for (Eigen::Index j = 0; j < m; ++j)
        typeset(i, j) = (i == j ? an[static_cast<std::size_t>(i + 1)] : 0.0) + cd_naudts_entry(params, pi, p[0]);
    }
    out.naudts_typeset_residual = (typeset - gn.entries).cwiseAbs().maxCoeff();
  }
  return out;
}

}  // namespace phigeo
