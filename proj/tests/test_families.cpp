#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phigeo/error.hpp"
#include "phigeo/families.hpp"

using namespace phigeo;

namespace {

// Independent 5-point derivative with a fixed absolute step.
double slope(const Deformation& d, double x) {
  const double h = 1e-4 * x;
  return (-d.log(x + 2 * h) + 8 * d.log(x + h) - 8 * d.log(x - h) + d.log(x - 2 * h)) / (12 * h);
}

}  // namespace

TEST_CASE("tabulated rows") {
  CHECK(tsallis(2.0).phi(2.0) == doctest::Approx(4.0));
  CHECK(stretched(2.0).phi(std::numbers::e) == doctest::Approx(2.0 * std::numbers::e));
  CHECK(stretched(2.0).log(std::numbers::e) == doctest::Approx(1.0));
  CHECK(stretched(2.0).exp(1.0) == doctest::Approx(std::numbers::e));
  CHECK(tsallis(2.0).exp(0.5) == doctest::Approx(2.0));
  const auto id = identity();
  CHECK(id.phi(0.3) == 0.3);
  CHECK(std::isinf(id.lower_limit()));
  CHECK(std::isinf(id.upper_limit()));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(tsallis(1.0), DomainError);
  CHECK_THROWS_AS(tsallis(0.0), DomainError);
  CHECK_THROWS_AS(stretched(1.0), DomainError);
  CHECK_THROWS_AS(cd_family(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(cd_family(1.6, 0.5), DomainError);
  CHECK_THROWS_AS(cd_family(0.5, 3.5), DomainError);
  CHECK_THROWS_AS(cd_family(0.5, 0.5, -1.0), DomainError);
}

TEST_CASE("stretched generator is singular at 1") {
  const auto s = stretched(2.0);
  CHECK(s.phi(1.0) == 0.0);
  CHECK(std::isinf(stretched(0.5).phi(1.0)));
  for (double x : {0.01, 0.2, 0.9, 1.5, 10.0}) CHECK(slope(s, x) * s.phi(x) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("auto_r") {
  CHECK(auto_r(0.7, 0.4) == doctest::Approx(1.0 / (0.3 + 0.28)));
  CHECK(auto_r(0.5, 0.0) == doctest::Approx(2.0));
  CHECK(auto_r(0.8, -0.5) == doctest::Approx(std::exp(0.5) / 0.2));
  CHECK_THROWS_AS(auto_r(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(auto_r(1.0, -0.5), DomainError);
}

TEST_CASE("(c,d) branch classification") {
  CHECK(CdParams::make(1.0, 1.0).branch == CdBranch::shannon);
  CHECK(CdParams::make(0.5, 0.0).branch == CdBranch::d_zero);
  CHECK(CdParams::make(1.0, 0.5).branch == CdBranch::c_one);
  const auto p = CdParams::make(0.7, 0.4);
  CHECK(p.branch == CdBranch::generic);
  CHECK(p.A == doctest::Approx(0.7 * 0.4 * p.r / (1.0 - 0.3 * p.r)));
  const double k = 0.3 * p.r / (1.0 - 0.3 * p.r);
  CHECK(p.B == doctest::Approx(k * std::exp(k)));
  CHECK(std::isnan(CdParams::make(0.5, 0.0).A));
}

TEST_CASE("(c,d) special branches match known families") {
  // (q, 0) with r = 1/(1-q) is the Tsallis log with exponent 2 - q.
  const auto cd = cd_family(0.5, 0.0);
  const auto ts = tsallis(1.5);
  for (double x : {0.01, 0.4, 2.0, 50.0}) {
    CHECK(cd.log(x) == doctest::Approx(ts.log(x)).epsilon(1e-13));
    CHECK(cd.phi(x) == doctest::Approx(ts.phi(x)).epsilon(1e-13));
  }
  const auto sh = cd_family(1.0, 1.0);
  CHECK(sh.log(0.3) == doctest::Approx(std::log(0.3)));
  // c = 1: r - r (1 - ln x / (d r))^d, with r = 1/d under auto_r.
  const auto c1 = cd_family(1.0, 0.5);
  const double r = 2.0;
  CHECK(c1.log(0.3) == doctest::Approx(r - r * std::pow(1.0 - std::log(0.3) / (0.5 * r), 0.5)));
}

TEST_CASE("(c,d) generator is 1 / log'") {
  for (auto [c, d] : {std::pair{0.7, 0.4}, {0.8, 0.5}, {0.8, -0.5}, {0.3, 1.5}, {1.0, 0.5}, {0.5, 0.0}}) {
    const auto f = cd_family(c, d);
    for (double x : {1e-4, 0.01, 0.2, 0.6, 0.95}) {
      INFO("c=" << c << " d=" << d << " x=" << x);
      CHECK(slope(f, x) * f.phi(x) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("typeset (c,d) generator agrees with 1 / log'") {
  for (auto [c, d] : {std::pair{0.7, 0.4}, {0.8, 0.5}, {0.8, -0.5}}) {
    const auto p = CdParams::make(c, d);
    const auto f = cd_family(p);
    for (double x : {1e-3, 0.1, 0.5, 0.9, 2.0}) CHECK(cd_phi_printed(p, x) == doctest::Approx(f.phi(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cd_phi_printed(CdParams::make(0.5, 0.0), 0.5), BranchError);
}

TEST_CASE("(c,d) Lambert exponential") {
  for (auto [c, d] : {std::pair{0.7, 0.4}, {0.8, 0.5}, {0.8, -0.5}, {0.3, 1.5}}) {
    const auto p = CdParams::make(c, d);
    const auto f = cd_family(p);
    for (double x : {1e-6, 1e-3, 0.1, 0.5, 0.99, 1.7}) {
      if (x <= f.domain_lo() || x >= f.domain_hi()) continue;
      INFO("c=" << c << " d=" << d << " x=" << x);
      const auto r = cd_exp_closed(p, f.log(x));
      CHECK(r.value == doctest::Approx(x).epsilon(1e-10));
      CHECK(f.exp(f.log(x)) == doctest::Approx(x).epsilon(1e-10));
    }
  }
  CHECK(cd_lambert_branch(CdParams::make(0.7, 0.4)) == specfun::Branch::principal);
}

TEST_CASE("(c,d) warns outside the classification range") {
  const auto f = cd_family(1.02, 0.5);
  bool noted = false;
  for (const auto& w : f.warnings()) noted = noted || w.find("c > 1") != std::string::npos;
  CHECK(noted);
}
