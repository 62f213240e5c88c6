#include "phigeo/families.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "phigeo/error.hpp"

namespace phigeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string label(const char* family, std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os << family << "(";
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) os << ",";
    os << k << "=" << v;
    first = false;
  }
  os << ")";
  return os.str();
}

double sgn(double v) { return v < 0.0 ? -1.0 : (v > 0.0 ? 1.0 : 0.0); }

}  // namespace

Deformation identity() {
  DeformationSpec s;
  s.name = "shannon";
  s.phi = [](double x) { return x; };
  s.phi_prime = [](double) { return 1.0; };
  s.phi_second = [](double) { return 0.0; };
  s.log_closed = [](double x) { return std::log(x); };
  s.exp_closed = [](double y) { return std::exp(y); };
  s.naudts_primitive = [](double x) { return x == 0.0 ? 0.0 : x * std::log(x) - x; };
  s.log_lower_limit = -kInf;
  s.log_upper_limit = kInf;
  return Deformation(std::move(s));
}

Deformation tsallis(double q) {
  if (!(q > 0.0) || q == 1.0 || !std::isfinite(q)) throw DomainError("tsallis: q must be > 0 and != 1");
  const double w = 1.0 - q;
  DeformationSpec s;
  s.name = label("tsallis", {{"q", q}});
  s.params = {q};
  s.phi = [q](double x) { return std::pow(x, q); };
  s.phi_prime = [q](double x) { return q * std::pow(x, q - 1.0); };
  s.phi_second = [q](double x) { return q * (q - 1.0) * std::pow(x, q - 2.0); };
  s.log_closed = [w](double x) { return (std::pow(x, w) - 1.0) / w; };
  s.exp_closed = [w](double y) { return std::pow(1.0 + w * y, 1.0 / w); };
  if (q < 2.0) {
    s.naudts_primitive = [q, w](double x) {
      return x == 0.0 ? 0.0 : (std::pow(x, 2.0 - q) / (2.0 - q) - x) / w;
    };
  }
  s.log_lower_limit = q < 1.0 ? -1.0 / w : -kInf;
  s.log_upper_limit = q < 1.0 ? kInf : -1.0 / w;
  return Deformation(std::move(s));
}

Deformation stretched(double eta) {
  if (!(eta > 0.0) || eta == 1.0 || !std::isfinite(eta)) throw DomainError("stretched: eta must be > 0 and != 1");
  const double inv = 1.0 / eta;
  DeformationSpec s;
  s.name = label("stretched", {{"eta", eta}});
  s.params = {eta};
  s.phi = [eta, inv](double x) { return x * eta * std::pow(std::abs(std::log(x)), 1.0 - inv); };
  s.phi_prime = [eta, inv](double x) {
    const double l = std::log(x);
    const double al = std::abs(l);
    return eta * std::pow(al, -inv) * (al + (1.0 - inv) * sgn(l));
  };
  s.log_closed = [inv](double x) {
    const double l = std::log(x);
    return sgn(l) * std::pow(std::abs(l), inv);
  };
  s.exp_closed = [eta](double y) { return std::exp(sgn(y) * std::pow(std::abs(y), eta)); };
  // int_0^x log = -Gamma(1 + 1/eta, -ln x) on (0, 1].
  s.naudts_primitive = [inv](double x) {
    if (x == 0.0) return 0.0;
    if (x > 1.0) return kNaN;
    return -specfun::upper_gamma(1.0 + inv, -std::log(x));
  };
  s.log_lower_limit = -kInf;
  s.log_upper_limit = kInf;
  s.check_hi = 0.999;
  s.require_monotone = false;
  return Deformation(std::move(s));
}

// ---------------------------------------------------------------------------
// (c,d) family

const char* to_string(CdBranch b) {
  switch (b) {
    case CdBranch::generic: return "generic";
    case CdBranch::d_zero: return "d_zero";
    case CdBranch::c_one: return "c_one";
    case CdBranch::shannon: return "shannon";
  }
  return "?";
}

double auto_r(double c, double d) {
  if (d >= 0.0) {
    const double den = 1.0 - c + c * d;
    if (den == 0.0) throw DomainError("auto_r: 1 - c + c d = 0");
    return 1.0 / den;
  }
  if (c == 1.0) throw DomainError("auto_r: c = 1 with d < 0 has no default scale");
  return std::exp(-d) / (1.0 - c);
}

double CdParams::bracket_coeff() const { return (1.0 - (1.0 - c) * r) / (d * r); }

double CdParams::lambert_k() const {
  const double k_den = 1.0 - (1.0 - c) * r;
  return (1.0 - c) * r / k_den;
}

CdParams CdParams::make(double c, double d, std::optional<double> r) {
  if (!(c > 0.0 && c <= 1.5) || !std::isfinite(c)) throw DomainError("cd: c must lie in (0, 1.5]");
  if (!(d >= -2.0 && d <= 3.0)) throw DomainError("cd: d must lie in [-2, 3]");
  CdParams p;
  p.c = c;
  p.d = d;
  p.r = r ? *r : auto_r(c, d);
  if (!(p.r > 0.0) || !std::isfinite(p.r)) throw DomainError("cd: scale r must be positive and finite");
  if (c == 1.0 && d == 1.0)
    p.branch = CdBranch::shannon;
  else if (d == 0.0)
    p.branch = CdBranch::d_zero;
  else if (c == 1.0)
    p.branch = CdBranch::c_one;
  else
    p.branch = CdBranch::generic;

  if (p.branch == CdBranch::generic) {
    const double k_den = 1.0 - (1.0 - c) * p.r;
    if (k_den == 0.0) throw DomainError("cd: 1 - (1 - c) r = 0 off the d = 0 branch");
    p.A = c * d * p.r / k_den;
    const double k = p.lambert_k();
    p.B = k * std::exp(k);
  } else {
    p.A = kNaN;
    p.B = kNaN;
  }
  return p;
}

namespace {

struct CdShape {
  double c, d, r, a;
  double B(double x) const { return 1.0 - a * std::log(x); }
  double D(double x) const { return 1.0 - r * (1.0 - c) * a * std::log(x); }
  double log(double x) const { return r - r * std::pow(x, c - 1.0) * std::pow(B(x), d); }
  double phi(double x) const { return std::pow(x, 2.0 - c) * std::pow(B(x), 1.0 - d) / D(x); }
  double phi_prime(double x) const {
    const double b = B(x), dd = D(x);
    return phi(x) / x * (2.0 - c - (1.0 - d) * a / b + r * (1.0 - c) * a / dd);
  }
};

// Invert a monotone increasing log on (exp(u_lo), exp(u_hi)).
double invert_monotone(const std::function<double(double)>& log, double y, double x_lo, double x_hi) {
  const double u_lo = x_lo > 0.0 ? std::log(x_lo) * (1.0 - 1e-15) + 1e-300 : -700.0;
  const double u_hi = std::isfinite(x_hi) ? std::log(x_hi) : 700.0;
  auto f = [&](double u) { return log(std::exp(u)) - y; };
  // Pull the bracket inside where the log is finite.
  double lo = u_lo, hi = u_hi;
  while (!std::isfinite(f(lo)) && hi - lo > 1e-12) lo = 0.5 * (lo + std::min(0.0, hi));
  while (!std::isfinite(f(hi)) && hi - lo > 1e-12) hi = 0.5 * (hi + std::max(0.0, lo));
  return std::exp(specfun::find_root(f, lo, hi, {1e-15, 1e-15, 300}));
}

double lambert_exp(const CdParams& p, specfun::Branch branch, double y) {
  const double base = 1.0 - y / p.r;
  if (!(base > 0.0)) throw DomainError("cd_exp: 1 - y/r must be positive");
  const double z = p.B * std::pow(base, 1.0 / p.d);
  const double w = specfun::lambert_w(branch, z);
  return std::exp(-(p.d / (1.0 - p.c)) * (w - p.lambert_k()));
}

struct Window {
  double lo = 0.0;
  double hi = kInf;
};

// Open interval where B > 0 and D > 0 for the generic and c_one shapes.
Window working_window(const CdShape& s) {
  Window w;
  auto clip = [&](double coeff) {
    // 1 - coeff * ln x > 0
    if (coeff > 0.0) w.hi = std::min(w.hi, std::exp(1.0 / coeff));
    if (coeff < 0.0) w.lo = std::max(w.lo, std::exp(1.0 / coeff));
  };
  clip(s.a);
  clip(s.r * (1.0 - s.c) * s.a);
  return w;
}

}  // namespace

specfun::Branch cd_lambert_branch(const CdParams& p) {
  if (p.branch != CdBranch::generic) throw BranchError("cd_lambert_branch: generic branch only");
  if (p.B >= 0.0) return specfun::Branch::principal;
  const CdShape shape{p.c, p.d, p.r, p.bracket_coeff()};
  const double probe = 0.5;
  const double y = shape.log(probe);
  double best_err = kInf;
  specfun::Branch best = specfun::Branch::principal;
  for (auto b : {specfun::Branch::principal, specfun::Branch::lower}) {
    try {
      const double x = lambert_exp(p, b, y);
      const double err = std::abs(x - probe);
      if (err < best_err) {
        best_err = err;
        best = b;
      }
    } catch (const std::exception&) {
    }
  }
  return best;
}

double cd_phi_printed(const CdParams& p, double x) {
  if (p.branch != CdBranch::generic) throw BranchError("cd_phi_printed: generic branch only");
  const CdShape shape{p.c, p.d, p.r, p.bracket_coeff()};
  const double c = p.c, d = p.d, r = p.r, lx = std::log(x);
  return x / (r - shape.log(x)) * (((-c * r + r - 1.0) * lx + d * r) / ((c - 1.0) * ((c - 1.0) * r + 1.0) * lx + d));
}

CdExpResult cd_exp_closed(const CdParams& p, double y) {
  CdExpResult out;
  if (p.branch == CdBranch::shannon) {
    out.value = std::exp(y);
    return out;
  }
  if (p.branch != CdBranch::generic) throw BranchError("cd_exp_closed: generic branch only");
  out.lambert_branch = cd_lambert_branch(p);
  if (y == 0.0) {
    out.value = 1.0;
    return out;
  }
  try {
    out.value = lambert_exp(p, out.lambert_branch, y);
    if (std::isfinite(out.value)) return out;
  } catch (const DomainError&) {
  }
  const CdShape shape{p.c, p.d, p.r, p.bracket_coeff()};
  const Window win = working_window(shape);
  out.value = invert_monotone([shape](double x) { return shape.log(x); }, y, win.lo, win.hi);
  out.used_fallback = true;
  return out;
}

Deformation cd_family(double c, double d, std::optional<double> r) { return cd_family(CdParams::make(c, d, r)); }

Deformation cd_family(const CdParams& p) {
  const std::string name = label("cd", {{"c", p.c}, {"d", p.d}, {"r", p.r}});
  DeformationSpec s;
  s.name = name;
  s.params = {p.c, p.d, p.r};
  if (p.c > 1.0) s.notes.push_back("c > 1 lies outside the (c,d) classification range (0, 1]");
  const double c = p.c, d = p.d, r = p.r;

  switch (p.branch) {
    case CdBranch::shannon: {
      s.phi = [](double x) { return x; };
      s.phi_prime = [](double) { return 1.0; };
      s.phi_second = [](double) { return 0.0; };
      s.log_closed = [](double x) { return std::log(x); };
      s.exp_closed = [](double y) { return std::exp(y); };
      s.naudts_primitive = [](double x) { return x == 0.0 ? 0.0 : x * std::log(x) - x; };
      s.log_lower_limit = -kInf;
      s.log_upper_limit = kInf;
      break;
    }
    case CdBranch::d_zero: {
      const double scale = r * (1.0 - c);
      if (scale <= 0.0) throw DomainError("cd(d=0): r (1 - c) must be positive");
      s.phi = [c, scale](double x) { return std::pow(x, 2.0 - c) / scale; };
      s.phi_prime = [c, scale](double x) { return (2.0 - c) * std::pow(x, 1.0 - c) / scale; };
      s.phi_second = [c, scale](double x) { return (2.0 - c) * (1.0 - c) * std::pow(x, -c) / scale; };
      s.log_closed = [c, r](double x) { return r * (1.0 - std::pow(x, c - 1.0)); };
      s.exp_closed = [c, r](double y) { return std::pow(1.0 - y / r, 1.0 / (c - 1.0)); };
      s.naudts_primitive = [c, r](double x) { return x == 0.0 ? 0.0 : r * (x - std::pow(x, c) / c); };
      s.log_lower_limit = c < 1.0 ? -kInf : r;
      s.log_upper_limit = c < 1.0 ? r : kInf;
      break;
    }
    case CdBranch::c_one: {
      const CdShape shape{1.0, d, r, 1.0 / (d * r)};
      const Window win = working_window(shape);
      if (win.lo >= 1e-9) throw DomainError(name + ": bracket 1 - ln(x)/(d r) is not positive on [1e-9, 1]");
      s.phi = [shape](double x) { return x * std::pow(shape.B(x), 1.0 - shape.d); };
      s.phi_prime = [shape](double x) {
        const double b = shape.B(x);
        return std::pow(b, -shape.d) * (b - (1.0 - shape.d) * shape.a);
      };
      s.log_closed = [shape](double x) { return shape.r - shape.r * std::pow(shape.B(x), shape.d); };
      s.exp_closed = [d, r](double y) { return std::exp(d * r * (1.0 - std::pow(1.0 - y / r, 1.0 / d))); };
      s.log_lower_limit = -kInf;
      s.log_upper_limit = r;
      s.domain_lo = win.lo;
      s.domain_hi = win.hi;
      s.monotone_check_hi = 1.0;
      s.consistency_tol = 1e-6;
      break;
    }
    case CdBranch::generic: {
      const CdShape shape{c, d, r, p.bracket_coeff()};
      const Window win = working_window(shape);
      if (win.lo >= 1e-9)
        throw DomainError(name + ": bracket (1 - a ln x) or log' is not positive on [1e-9, 1]");
      if (!(win.hi > 1.0)) throw DomainError(name + ": working range does not contain x = 1");
      const auto branch = cd_lambert_branch(p);
      s.notes.push_back(std::string("Lambert branch: ") +
                        (branch == specfun::Branch::principal ? "principal" : "lower"));
      s.phi = [shape](double x) { return shape.phi(x); };
      s.phi_prime = [shape](double x) { return shape.phi_prime(x); };
      s.log_closed = [shape](double x) { return shape.log(x); };
      s.exp_closed = [p, branch, shape, win](double y) {
        try {
          const double v = lambert_exp(p, branch, y);
          if (std::isfinite(v)) return v;
        } catch (const DomainError&) {
        }
        return invert_monotone([shape](double x) { return shape.log(x); }, y, win.lo, win.hi);
      };
      s.domain_lo = win.lo;
      s.domain_hi = win.hi;
      s.monotone_check_hi = 1.0;
      s.consistency_tol = 1e-6;
      break;
    }
  }
  return Deformation(std::move(s));
}

}  // namespace phigeo
