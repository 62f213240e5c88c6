#include <doctest.h>

#include <array>
#include <cmath>

#include "phigeo/error.hpp"
#include "phigeo/families.hpp"
#include "phigeo/geometry.hpp"
#include "phigeo/maxent.hpp"

using namespace phigeo;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ConfigMatrix column(std::initializer_list<double> v) { return ConfigMatrix(vec(v)); }

}  // namespace

TEST_CASE("configuration matrix") {
  CHECK_THROWS_AS(column({1.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(column({0.0}), DomainError);
  CHECK_THROWS_AS(ConfigMatrix::from_rows({{0, 0}, {1, 1}, {2, 2}}), DomainError);
  const auto E = ConfigMatrix::from_rows({{0, 1}, {1, 0}, {2, 2}});
  CHECK(E.n() == 3);
  CHECK(E.m() == 2);
}

TEST_CASE("normalize at theta = 0") {
  const auto f = normalize(identity(), column({0.0, 1.0}), vec({0.0}));
  CHECK(f.psi() == doctest::Approx(-std::log(2.0)));
  CHECK(f.pmf()[0] == doctest::Approx(0.5));
  for (const auto& d : {tsallis(0.5), tsallis(2.0), stretched(2.0), cd_family(0.7, 0.4)}) {
    const auto g = normalize(d, column({0.0, 1.0, 4.0, -2.0}), vec({0.0}));
    CHECK(g.psi() == doctest::Approx(d.log(0.25)).epsilon(1e-12));
    for (double x : g.pmf().probs()) CHECK(x == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("normalize with a cutoff state against a bisection scan") {
  // exp_q(y) = (1 + y/2)_+^2 at q = 0.5
  const double E[3] = {0.0, 1.0, 2.0};
  auto total = [&](double psi) {
    double s = 0.0;
    for (double e : E) s += std::pow(std::max(0.0, 1.0 + 0.5 * (psi - e)), 2);
    return s;
  };
  double lo = -2.0, hi = 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < 1.0 ? lo : hi) = mid;
  }
  const auto f = normalize(tsallis(0.5), column({0.0, 1.0, 2.0}), vec({-1.0}));
  CHECK(f.psi() == doctest::Approx(lo).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    const double expect = std::pow(std::max(0.0, 1.0 + 0.5 * (lo - E[i])), 2);
    CHECK(f.pmf()[static_cast<std::size_t>(i)] == doctest::Approx(expect).epsilon(1e-10));
  }

  // a steeper theta pushes the top state past the cutoff
  const auto g = normalize(tsallis(0.5), column({0.0, 1.0, 2.0}), vec({-3.0}));
  CHECK(g.pmf()[2] == 0.0);
  CHECK(g.pmf()[0] + g.pmf()[1] == doctest::Approx(1.0));
}

TEST_CASE("Massieu forms and dual coordinates") {
  const auto E = ConfigMatrix::from_rows({{0.0, 1.0}, {1.0, 0.5}, {2.0, -1.0}, {0.5, 0.0}});
  for (const auto& d : {identity(), tsallis(0.5), tsallis(2.0), stretched(2.0), cd_family(0.8, 0.5)}) {
    INFO(d.name());
    const Eigen::VectorXd th = vec({-0.4, 0.3});
    const auto f = normalize(d, E, th);
    const auto pf = psi_forms(f);
    CHECK(pf.psi_root == doctest::Approx(f.psi()));
    CHECK(std::abs(pf.psi_linear - pf.psi_root) < 1e-9);
    CHECK(std::abs(pf.psi_escort - pf.psi_root) < 1e-9);

    const Eigen::VectorXd eta = eta_coords(f);
    for (Eigen::Index k = 0; k < 2; ++k) {
      const double h = 1e-5;
      Eigen::VectorXd a = th, b = th;
      a(k) += h;
      b(k) -= h;
      const double grad = (normalize(d, E, a).massieu() - normalize(d, E, b).massieu()) / (2 * h);
      CHECK(grad == doctest::Approx(eta(k)).epsilon(1e-6));
    }

    const auto vd = varphi_dual(f);
    CHECK(std::abs(vd.legendre_value + f.massieu() - eta.dot(th)) < 1e-9);
    CHECK(std::abs(vd.legendre_value - vd.escort_average_value) < 1e-9);
    CHECK(vd.escort_average_value == doctest::Approx(-entropy_amari(d, f.pmf())).epsilon(1e-12));
  }
}

TEST_CASE("identity family is the softmax") {
  const auto f = normalize(identity(), column({0.0, 1.0}), vec({0.7}));
  CHECK(f.pmf()[1] / f.pmf()[0] == doctest::Approx(std::exp(0.7)));
  CHECK(f.psi() == doctest::Approx(-std::log(1.0 + std::exp(0.7))));
}

TEST_CASE("fit round trip") {
  const auto E = ConfigMatrix::from_rows({{0.0, 1.0}, {1.0, 0.5}, {2.0, -1.0}, {0.5, 0.0}});
  const Eigen::VectorXd th = vec({-0.4, 0.3});
  for (const auto& d : {identity(), tsallis(0.5), tsallis(2.0), cd_family(0.8, 0.5)}) {
    INFO(d.name());
    const auto f = normalize(d, E, th);
    const auto lin = fit_linear_moments(d, E, linear_moments(f));
    CHECK((lin.theta() - th).cwiseAbs().maxCoeff() < 1e-6);
    const auto esc = fit_escort_moments(d, E, eta_coords(f));
    CHECK((esc.theta() - th).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("escort fit hits its target") {
  const auto f = fit_escort_moments(tsallis(2.0), column({0.0, 1.0, 3.0}), vec({1.2}));
  CHECK(eta_coords(f)(0) == doctest::Approx(1.2).epsilon(1e-12));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double w = f.pmf()[i] * f.pmf()[i];
    num += w * std::array{0.0, 1.0, 3.0}[i];
    den += w;
  }
  CHECK(num / den == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("infeasible targets") {
  const auto E = column({0.0, 1.0, 2.0});
  CHECK(strictly_inside_hull(E, vec({1.5})));
  CHECK_FALSE(strictly_inside_hull(E, vec({2.0})));
  CHECK_THROWS_AS(fit_linear_moments(tsallis(0.5), E, vec({2.5})), InfeasibleTarget);
  CHECK_THROWS_AS(fit_escort_moments(tsallis(0.5), E, vec({-0.1})), InfeasibleTarget);
  const auto E2 = ConfigMatrix::from_rows({{0, 0}, {1, 0}, {0, 1}});
  CHECK(strictly_inside_hull(E2, vec({0.2, 0.2})));
  CHECK_FALSE(strictly_inside_hull(E2, vec({0.6, 0.6})));
}

TEST_CASE("linear fit maximizes the Naudts entropy") {
  const auto E = column({0.0, 1.0, 2.0});
  const auto d = tsallis(0.5);
  const auto f = fit_linear_moments(d, E, vec({0.8}));
  // v sums to zero and has zero first moment
  const double v[3] = {1.0, -2.0, 1.0};
  const double top = entropy_naudts(d, f.pmf());
  for (double eps : {1e-3, -1e-3, 1e-2, -1e-2}) {
    std::vector<double> q(3);
    for (std::size_t i = 0; i < 3; ++i) q[i] = f.pmf()[i] + eps * v[i];
    CHECK(entropy_naudts(d, ProbVec(q)) < top);
  }
}
