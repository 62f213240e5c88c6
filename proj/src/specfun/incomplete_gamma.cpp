#include <cmath>
#include <limits>
#include <numbers>

#include "phigeo/error.hpp"
#include "phigeo/specfun.hpp"

namespace phigeo::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 10000;

// Lower incomplete gamma by its power series, s > 0.
double lower_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(s * std::log(x) - x);
    }
  }
  throw NonConvergence("upper_gamma: series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Gamma(s, x).
double upper_continued_fraction(double s, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return std::exp(s * std::log(x) - x) * h;
  }
  throw NonConvergence("upper_gamma: continued fraction did not converge");
}

// E1(x) = Gamma(0, x) for small x.
double exponential_integral_series(double x) {
  constexpr double euler = std::numbers::egamma;
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= -x / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) < kEps * std::abs(sum)) break;
  }
  return -euler - std::log(x) - sum;
}

double positive_s(double s, double x) {
  if (x == 0.0) return std::tgamma(s);
  if (x < s + 1.0) return std::tgamma(s) - lower_series(s, x);
  return upper_continued_fraction(s, x);
}

}  // namespace

double upper_gamma(double s, double x) {
  if (std::isnan(s) || std::isnan(x)) throw DomainError("upper_gamma: NaN argument");
  if (x < 0.0) throw DomainError("upper_gamma: x must be >= 0");
  if (s > 0.0) return positive_s(s, x);
  if (x == 0.0) throw DomainError("upper_gamma: integral diverges for s <= 0 at x = 0");
  if (x >= 1.0) return upper_continued_fraction(s, x);

  // Gamma(s, x) = (Gamma(s+1, x) - x^s e^-x) / s, applied from the first
  // s + k that is positive (or exactly zero, where E1 takes over).
  const double k = std::ceil(-s);
  double top = s + k;
  double value;
  if (top == 0.0) {
    value = exponential_integral_series(x);
  } else {
    value = positive_s(top, x);
  }
  for (double a = top - 1.0; a >= s - 0.5; a -= 1.0) {
    value = (value - std::exp(a * std::log(x) - x)) / a;
  }
  return value;
}

}  // namespace phigeo::specfun
