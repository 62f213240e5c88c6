#include "phigeo/deform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "phigeo/error.hpp"

namespace phigeo {

using specfun::RealFn;
using specfun::Tolerance;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAnchorStep = 0.25;
constexpr double kAnchorReach = 700.0;
constexpr int kConvergedRun = 16;

const Tolerance kSegmentTol{1e-15, 1e-13, 400};
const Tolerance kInvertTol{1e-15, 1e-15, 300};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// ProbVec

ProbVec::ProbVec(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw DomainError("ProbVec: need at least two states");
  double sum = 0.0;
  interior_ = true;
  for (double v : probs_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("ProbVec: entries must be finite and >= 0");
    if (v == 0.0) interior_ = false;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("ProbVec: entries must sum to 1 (got " + fmt(sum) + ")");
}

ProbVec ProbVec::uniform(std::size_t n) { return ProbVec(std::vector<double>(n, 1.0 / static_cast<double>(n))); }

void ProbVec::require_interior(const char* who) const {
  if (!interior_) throw BoundaryError(std::string(who) + ": requires an interior point of the simplex");
}

// ---------------------------------------------------------------------------
// Deformation

struct Deformation::Impl {
  DeformationSpec spec;
  double lower = -kInf;
  double upper = kInf;
  // Anchor table in u = ln x: cumulative log values at u_k.
  std::vector<double> anchor_u;
  std::vector<double> anchor_log;
  std::vector<std::string> warnings;

  double integrand(double u) const {
    const double x = std::exp(u);
    return x / spec.phi(x);
  }

  double segment(double u0, double u1) const {
    if (spec.log_closed) return spec.log_closed(std::exp(u1)) - spec.log_closed(std::exp(u0));
    return specfun::integrate([this](double u) { return integrand(u); }, u0, u1, kSegmentTol);
  }

  void build_anchors();
  double numeric_log(double x) const;
  double invert(double y) const;
  void validate();
};

void Deformation::Impl::build_anchors() {
  const double u_lo = spec.domain_lo > 0.0 ? std::log(spec.domain_lo) : -kAnchorReach;
  const double u_hi = std::isfinite(spec.domain_hi) ? std::log(spec.domain_hi) : kAnchorReach;
  const bool bounded_lo = spec.domain_lo > 0.0;
  const bool bounded_hi = std::isfinite(spec.domain_hi);

  // Walk outward from u = 0 in one direction. Returns the limit of log_phi.
  auto walk = [&](double dir, double u_end, bool bounded, std::vector<double>& us, std::vector<double>& vals) {
    double u = 0.0;
    double cum = 0.0;
    int small_run = 0;
    while (true) {
      double next = u + dir * kAnchorStep;
      const bool last = dir > 0 ? next >= u_end : next <= u_end;
      if (last) {
        if (bounded) {
          // Limit at the domain edge; open GK rule tolerates an endpoint singularity.
          try {
            double edge;
            if (spec.log_closed) {
              edge = spec.log_closed(std::exp(u_end));
            } else {
              edge = cum + specfun::integrate([this](double s) { return integrand(s); }, u, u_end, kSegmentTol);
            }
            if (std::isfinite(edge)) return edge;
          } catch (const std::exception&) {
          }
          return dir * kInf;
        }
        next = u_end;
      }
      double inc;
      try {
        inc = segment(u, next);
      } catch (const std::exception&) {
        return dir * kInf;
      }
      if (!std::isfinite(inc) || !std::isfinite(cum + inc)) return dir * kInf;
      cum += inc;
      u = next;
      us.push_back(u);
      vals.push_back(cum);
      if (std::abs(inc) <= 1e-17 * std::max(1.0, std::abs(cum))) {
        if (++small_run >= 4 * kConvergedRun) return cum;
      } else {
        small_run = 0;
      }
      if (last) break;
    }
    // Reached |u| = kAnchorReach. Converged if the trailing increments are negligible.
    double tail = 0.0;
    const std::size_t m = vals.size();
    if (m > static_cast<std::size_t>(kConvergedRun)) tail = std::abs(vals[m - 1] - vals[m - 1 - kConvergedRun]);
    if (tail <= 1e-13 * std::max(1.0, std::abs(cum))) return cum;
    return dir * kInf;
  };

  std::vector<double> up_u, up_v, dn_u, dn_v;
  const double hi_lim = walk(1.0, u_hi, bounded_hi, up_u, up_v);
  const double lo_lim = walk(-1.0, u_lo, bounded_lo, dn_u, dn_v);
  if (!spec.log_upper_limit) upper = hi_lim;
  if (!spec.log_lower_limit) lower = lo_lim;

  anchor_u.assign(dn_u.rbegin(), dn_u.rend());
  anchor_log.assign(dn_v.rbegin(), dn_v.rend());
  anchor_u.push_back(0.0);
  anchor_log.push_back(0.0);
  anchor_u.insert(anchor_u.end(), up_u.begin(), up_u.end());
  anchor_log.insert(anchor_log.end(), up_v.begin(), up_v.end());
}

double Deformation::Impl::numeric_log(double x) const {
  const double u = std::log(x);
  auto it = std::upper_bound(anchor_u.begin(), anchor_u.end(), u);
  std::size_t k;
  if (it == anchor_u.begin()) {
    k = 0;
  } else {
    k = static_cast<std::size_t>(it - anchor_u.begin()) - 1;
  }
  const double base_u = anchor_u[k];
  if (base_u == u) return anchor_log[k];
  return anchor_log[k] + specfun::integrate([this](double s) { return integrand(s); }, base_u, u, kSegmentTol);
}

double Deformation::Impl::invert(double y) const {
  auto log_at_u = [this](double u) {
    const double x = std::exp(u);
    return spec.log_closed ? spec.log_closed(x) : numeric_log(x);
  };
  auto it = std::upper_bound(anchor_log.begin(), anchor_log.end(), y);
  double u_lo, u_hi;
  if (it == anchor_log.end()) {
    u_lo = anchor_u.back();
    u_hi = std::min(u_lo + 50.0, std::isfinite(spec.domain_hi) ? std::log(spec.domain_hi) : kAnchorReach + 50.0);
    if (!(u_hi > u_lo)) return std::exp(u_lo);
  } else if (it == anchor_log.begin()) {
    u_hi = anchor_u.front();
    u_lo = std::max(u_hi - 50.0, spec.domain_lo > 0.0 ? std::log(spec.domain_lo) : -kAnchorReach - 50.0);
    if (!(u_hi > u_lo)) return std::exp(u_hi);
  } else {
    const auto k = static_cast<std::size_t>(it - anchor_log.begin());
    u_lo = anchor_u[k - 1];
    u_hi = anchor_u[k];
  }
  auto f = [&](double u) { return log_at_u(u) - y; };
  double f_lo, f_hi;
  try {
    f_lo = f(u_lo);
    f_hi = f(u_hi);
  } catch (const std::exception&) {
    f_lo = f_hi = std::numeric_limits<double>::quiet_NaN();
  }
  if (!(f_lo <= 0.0 && f_hi >= 0.0)) {
    // Gap between the last anchor and the (finite) limit; the nearest anchor is the answer to working precision.
    return std::exp(it == anchor_log.begin() ? u_hi : u_lo);
  }
  return std::exp(specfun::find_root(f, u_lo, u_hi, kInvertTol));
}

void Deformation::Impl::validate() {
  const DeformationSpec& s = spec;
  auto fail = [&](const std::string& what) { throw ValidationError(s.name + ": " + what); };
  auto warn = [&](const std::string& what) { warnings.push_back(what); };

  if (s.log_closed) {
    const double at_one = s.log_closed(1.0);
    if (!(std::abs(at_one) <= 1e-13)) fail("log_phi(1) must be 0 (got " + fmt(at_one) + ")");
  }

  const double lo = std::max(s.check_lo, s.domain_lo);
  const double hi = std::min(s.check_hi, s.domain_hi);
  const double t0 = std::log10(lo);
  const double t1 = std::log10(hi);
  bool reported_monotone = false;
  for (double t = t0; t <= t1 + 1e-12; t += 0.125) {
    const double x = std::pow(10.0, t);
    // Stay strictly inside the open domain, clear of the 5-point stencil.
    if (!(x * (1.0 - 3e-3) > s.domain_lo) || !(x * (1.0 + 3e-3) < s.domain_hi)) continue;
    const double ph = s.phi(x);
    if (!(ph > 0.0) || !std::isfinite(ph)) {
      if (s.require_monotone) fail("phi must be positive and finite at x = " + fmt(x));
      warn("phi not positive/finite at x = " + fmt(x));
      continue;
    }
    const double dph = s.phi_prime(x);
    if (!(dph > 0.0)) {
      if (s.require_monotone && x <= s.monotone_check_hi) fail("phi must be strictly increasing (phi'(" + fmt(x) + ") = " + fmt(dph) + ")");
      if (!reported_monotone) warn("phi not increasing near x = " + fmt(x));
      reported_monotone = true;
    }
    if (s.log_closed) {
      const double lx = s.log_closed(x);
      if ((x < 1.0 && !(lx < 0.0)) || (x > 1.0 && !(lx > 0.0)))
        fail("log_phi has the wrong sign at x = " + fmt(x));
      // Shrink the stencil near a finite domain edge, where higher derivatives grow.
      const double room = std::min(x - s.domain_lo, s.domain_hi - x) / x;
      const double step = std::clamp(0.01 * room, 1e-6, 1e-3);
      double rel = std::abs(specfun::derivative_relative(s.log_closed, x, step) * ph - 1.0);
      if (!(rel <= s.consistency_tol))
        rel = std::min(rel, std::abs(specfun::derivative_relative(s.log_closed, x, 0.25 * step) * ph - 1.0));
      // Where log_phi saturates, cancellation in the stencil dominates.
      constexpr double eps = std::numeric_limits<double>::epsilon();
      bool ok = rel <= s.consistency_tol + 10.0 * eps * std::abs(lx) * ph / (step * x);
      if (!ok) {
        // A wider secant against the quadrature of 1/phi tolerates rounding in log_closed.
        const double b = x + std::min(0.1 * x, 0.5 * (s.domain_hi - x));
        try {
          const double inc = specfun::integrate([&](double t) { return 1.0 / s.phi(t); }, x, b, {1e-300, 1e-10, 200});
          const double lb = s.log_closed(b);
          const double rel_int = std::abs((lb - lx) / inc - 1.0);
          ok = rel_int <= s.consistency_tol + 10.0 * eps * std::max(std::abs(lx), std::abs(lb)) / std::abs(inc);
          rel = std::min(rel, rel_int);
        } catch (const NonConvergence&) {
        }
      }
      if (!ok)
        fail("d/dx log_phi != 1/phi at x = " + fmt(x) + " (relative mismatch " + fmt(rel) + ")");
    }
  }
}

Deformation::Deformation(DeformationSpec spec) {
  if (!spec.phi || !spec.phi_prime) throw DomainError("Deformation: phi and phi_prime are required");
  if (!(spec.domain_lo < 1.0 && spec.domain_hi > 1.0))
    throw DomainError("Deformation: domain must contain x = 1");
  auto impl = std::make_shared<Impl>();
  impl->spec = std::move(spec);
  impl->warnings = impl->spec.notes;
  impl->validate();
  if (impl->spec.log_lower_limit) impl->lower = *impl->spec.log_lower_limit;
  if (impl->spec.log_upper_limit) impl->upper = *impl->spec.log_upper_limit;
  if (!impl->spec.log_closed || !impl->spec.exp_closed || !impl->spec.log_lower_limit ||
      !impl->spec.log_upper_limit) {
    impl->build_anchors();
  }
  impl_ = std::move(impl);
}

const std::string& Deformation::name() const { return impl_->spec.name; }
const std::vector<double>& Deformation::params() const { return impl_->spec.params; }
double Deformation::phi(double x) const { return impl_->spec.phi(x); }
double Deformation::phi_prime(double x) const { return impl_->spec.phi_prime(x); }

double Deformation::phi_second(double x) const {
  if (impl_->spec.phi_second) return impl_->spec.phi_second(x);
  return specfun::derivative_relative(impl_->spec.phi_prime, x);
}

double Deformation::log(double x) const {
  if (!(x > 0.0)) throw DomainError(name() + ": log_phi requires x > 0");
  if (!(x > impl_->spec.domain_lo) || !(x < impl_->spec.domain_hi))
    throw DomainError(name() + ": x = " + fmt(x) + " outside the domain of the deformation");
  if (impl_->spec.log_closed) return impl_->spec.log_closed(x);
  return impl_->numeric_log(x);
}

double Deformation::exp(double y) const {
  if (std::isnan(y)) throw DomainError(name() + ": exp_phi of NaN");
  if (y <= impl_->lower) return 0.0;
  if (y >= impl_->upper)
    throw RangeError(name() + ": exp_phi argument " + fmt(y) + " at or above sup log_phi = " + fmt(impl_->upper));
  if (y == 0.0) return 1.0;
  if (impl_->spec.exp_closed) return impl_->spec.exp_closed(y);
  return impl_->invert(y);
}

bool Deformation::has_closed_log() const { return static_cast<bool>(impl_->spec.log_closed); }
bool Deformation::has_closed_exp() const { return static_cast<bool>(impl_->spec.exp_closed); }
double Deformation::lower_limit() const { return impl_->lower; }
double Deformation::upper_limit() const { return impl_->upper; }
double Deformation::domain_lo() const { return impl_->spec.domain_lo; }
double Deformation::domain_hi() const { return impl_->spec.domain_hi; }

std::optional<double> Deformation::naudts_primitive(double x) const {
  if (!impl_->spec.naudts_primitive) return std::nullopt;
  const double v = impl_->spec.naudts_primitive(x);
  if (std::isnan(v)) return std::nullopt;
  return v;
}

const std::vector<std::string>& Deformation::warnings() const { return impl_->warnings; }

// ---------------------------------------------------------------------------
// Free operations

double log_phi(const Deformation& d, double x) { return d.log(x); }
double exp_phi(const Deformation& d, double y) { return d.exp(y); }

namespace {

double phi_on_simplex(const Deformation& d, double p, const char* who) {
  const double v = d.phi(p);
  if (!std::isfinite(v) || v < 0.0 || (p > 0.0 && v == 0.0))
    throw BoundaryError(std::string(who) + ": phi undefined at p = " + fmt(p));
  return v;
}

}  // namespace

double h_phi(const Deformation& d, const ProbVec& p) {
  double h = 0.0;
  for (double v : p.probs()) h += phi_on_simplex(d, v, "h_phi");
  if (!(h > 0.0)) throw BoundaryError("h_phi: sum of phi(p_i) is not positive");
  return h;
}

ProbVec escort(const Deformation& d, const ProbVec& p) {
  std::vector<double> w(p.size());
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    w[i] = phi_on_simplex(d, p[i], "escort");
    h += w[i];
  }
  if (!(h > 0.0)) throw BoundaryError("escort: sum of phi(p_i) is not positive");
  for (double& v : w) v /= h;
  return ProbVec(std::move(w));
}

Deformation chi_dual(const Deformation& d) {
  const double phi_one = d.phi(1.0);
  if (!(phi_one > 0.0) || !std::isfinite(phi_one))
    throw ValidationError("chi_dual(" + d.name() + "): phi(1) must be positive and finite to anchor log_chi at 1");
  DeformationSpec s;
  s.name = "chi_dual(" + d.name() + ")";
  s.params = d.params();
  s.phi = [d](double x) { return d.phi(x) / d.phi_prime(x); };
  s.phi_prime = [d](double x) {
    const double dp = d.phi_prime(x);
    return 1.0 - d.phi(x) * d.phi_second(x) / (dp * dp);
  };
  s.log_closed = [d, phi_one](double x) { return std::log(d.phi(x) / phi_one); };
  s.domain_lo = d.domain_lo();
  s.domain_hi = d.domain_hi();
  s.consistency_tol = 1e-7;
  return Deformation(std::move(s));
}

Deformation exp_of_log(const Deformation& d) {
  DeformationSpec s;
  s.name = "exp_of_log(" + d.name() + ")";
  s.params = d.params();
  s.phi = [d](double x) { return std::exp(d.log(x)); };
  s.phi_prime = [d](double x) { return std::exp(d.log(x)) / d.phi(x); };
  s.phi_second = [d](double x) {
    const double ph = d.phi(x);
    return std::exp(d.log(x)) * (1.0 - d.phi_prime(x)) / (ph * ph);
  };
  s.domain_lo = d.domain_lo();
  s.domain_hi = d.domain_hi();
  // xi underflows where log_d is very negative; validate only where it is representable.
  for (double t = -9.0; t < 0.0; t += 0.125) {
    const double x = std::pow(10.0, t);
    if (x > d.domain_lo() && s.phi(x) > 1e-250) {
      s.check_lo = x;
      break;
    }
  }

  // Concavity of log_xi: xi'' xi <= xi'^2 on the validation grid.
  for (double t = -9.0; t <= 3.0 + 1e-12; t += 0.125) {
    const double x = std::pow(10.0, t);
    if (!(x > d.domain_lo()) || !(x < d.domain_hi())) continue;
    const double v = s.phi(x), v1 = s.phi_prime(x), v2 = s.phi_second(x);
    if (std::isfinite(v2) && v2 * v > v1 * v1 * (1.0 + 1e-12)) {
      s.notes.push_back("concavity condition xi'' <= xi'^2/xi fails at x = " + fmt(x));
      break;
    }
  }
  return Deformation(std::move(s));
}

Deformation ts_dual(const Deformation& d, double nu) {
  if (!std::isfinite(nu)) throw DomainError("ts_dual: nu must be finite");
  double dom_lo = d.domain_lo();
  double dom_hi = d.domain_hi();
  if (nu != 0.0) {
    const double pole_log = -1.0 / nu;
    if (pole_log > d.lower_limit() && pole_log < d.upper_limit()) {
      const double x_pole = d.exp(pole_log);
      if (x_pole >= 1e-9 && x_pole <= 1e3)
        throw PoleError("ts_dual(" + d.name() + ", nu=" + fmt(nu) + "): 1 + nu log vanishes at x = " + fmt(x_pole));
      if (nu > 0.0)
        dom_lo = std::max(dom_lo, x_pole);
      else
        dom_hi = std::min(dom_hi, x_pole);
    }
  }
  auto limit = [nu](double l_end) {
    if (std::isinf(l_end)) return nu == 0.0 ? l_end : 1.0 / nu;
    const double den = 1.0 + nu * l_end;
    if (den <= 0.0) return std::copysign(kInf, l_end);
    return l_end / den;
  };
  const double lo_log = (nu > 0.0 && -1.0 / nu > d.lower_limit()) ? -1.0 / nu : d.lower_limit();
  const double hi_log = (nu < 0.0 && -1.0 / nu < d.upper_limit()) ? -1.0 / nu : d.upper_limit();

  DeformationSpec s;
  std::ostringstream name;
  name << "ts_dual(" << d.name() << ", nu=" << nu << ")";
  s.name = name.str();
  s.params = d.params();
  s.params.push_back(nu);
  s.phi = [d, nu](double x) {
    const double f = 1.0 + nu * d.log(x);
    return d.phi(x) * f * f;
  };
  s.phi_prime = [d, nu](double x) {
    const double f = 1.0 + nu * d.log(x);
    return d.phi_prime(x) * f * f + 2.0 * nu * f;
  };
  s.log_closed = [d, nu](double x) {
    const double l = d.log(x);
    return l / (1.0 + nu * l);
  };
  s.exp_closed = [d, nu](double y) { return d.exp(y / (1.0 - nu * y)); };
  s.log_lower_limit = limit(lo_log);
  s.log_upper_limit = limit(hi_log);
  s.domain_lo = dom_lo;
  s.domain_hi = dom_hi;
  s.consistency_tol = 1e-8;
  return Deformation(std::move(s));
}

}  // namespace phigeo
