#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phigeo/error.hpp"
#include "phigeo/families.hpp"
#include "phigeo/geometry.hpp"
#include "phigeo/sampling.hpp"

using namespace phigeo;

namespace {

double kl(const ProbVec& p, const ProbVec& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * std::log(p[i] / q[i]);
  return s;
}

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("Naudts entropy values") {
  const ProbVec half({0.5, 0.5});
  CHECK(entropy_naudts(identity(), half) == doctest::Approx(std::log(2.0) + 1.0).epsilon(1e-12));
  // (1/(q-1)) (sum p^(2-q) / (2-q) - 1) at q = 0.5
  const double ts = (1.0 / -0.5) * (2.0 * std::pow(0.5, 1.5) / 1.5 - 1.0);
  CHECK(entropy_naudts(tsallis(0.5), half) == doctest::Approx(ts).epsilon(1e-12));
  CHECK(ts == doctest::Approx(1.05719).epsilon(1e-5));
  CHECK(entropy_naudts(identity(), ProbVec({1.0, 0.0})) == doctest::Approx(1.0));
  // 1 - 1/x is not integrable at 0
  CHECK_THROWS_AS(entropy_naudts(tsallis(2.0), half), DivergentIntegral);
}

TEST_CASE("Amari entropy values") {
  const ProbVec p({0.2, 0.3, 0.5});
  double sh = 0.0;
  for (double x : p.probs()) sh -= x * std::log(x);
  CHECK(entropy_amari(identity(), p) == doctest::Approx(sh).epsilon(1e-14));
  CHECK(entropy_amari(tsallis(0.5), ProbVec({0.5, 0.5})) == doctest::Approx(2.0 * (1.0 - 1.0 / std::sqrt(2.0))));
  for (const auto& d : {tsallis(2.0), stretched(2.0), cd_family(0.7, 0.4)})
    CHECK(entropy_amari(d, ProbVec::uniform(4)) == doctest::Approx(-d.log(0.25)).epsilon(1e-12));
}

TEST_CASE("entropy_from_phi_nu") {
  const ProbVec p({0.1, 0.6, 0.3});
  double ts = 0.0;
  for (double x : p.probs()) ts += (std::pow(x, 0.3) - x) / 0.7;
  CHECK(entropy_from_phi_nu(tsallis(0.3), 0.7, p) == doctest::Approx(ts).epsilon(1e-14));
  CHECK(entropy_from_phi_nu(identity(), 0.4, p) == 0.0);
  CHECK(entropy_from_phi_nu(tsallis(2.0), -1.0, ProbVec({0.5, 0.5})) == doctest::Approx(0.5));
}

TEST_CASE("maximality at the uniform point") {
  Sampler s(11);
  for (const auto& d : {identity(), tsallis(0.5), tsallis(1.5), cd_family(0.7, 0.4)}) {
    const double top = entropy_naudts(d, ProbVec::uniform(3));
    for (int k = 0; k < 20; ++k) CHECK(entropy_naudts(d, s.simplex(3)) <= top + 1e-12);
  }
}

TEST_CASE("divergences") {
  const ProbVec p({0.6, 0.4});
  const ProbVec q({0.5, 0.5});
  CHECK(divergence_naudts(identity(), p, q) == doctest::Approx(kl(p, q)).epsilon(1e-10));
  CHECK(divergence_amari(identity(), p, q) == doctest::Approx(kl(p, q)).epsilon(1e-14));
  CHECK(divergence_naudts(tsallis(0.5), p, p) == doctest::Approx(0.0));
  CHECK(divergence_amari(tsallis(2.0), p, q) == doctest::Approx(1.0 / 13.0).epsilon(1e-14));

  // antiderivative of 2 (sqrt x - 1)
  auto F = [](double x) { return 4.0 / 3.0 * std::pow(x, 1.5) - 2.0 * x; };
  double expect = 0.0;
  for (std::size_t i = 0; i < 2; ++i) expect += F(p[i]) - F(q[i]) - 2.0 * (std::sqrt(q[i]) - 1.0) * (p[i] - q[i]);
  CHECK(divergence_naudts(tsallis(0.5), p, q) == doctest::Approx(expect).epsilon(1e-10));

  Sampler s(3);
  for (int k = 0; k < 20; ++k) {
    const ProbVec a = s.simplex(3), b = s.simplex(3);
    for (const auto& d : {tsallis(0.5), tsallis(2.0), stretched(2.0), cd_family(0.8, 0.5)}) {
      CHECK(divergence_naudts(d, a, b) >= -1e-12);
      CHECK(divergence_amari(d, a, b) >= -1e-12);
    }
  }
}

TEST_CASE("Csiszar and Bregman") {
  const ProbVec p({0.2, 0.5, 0.3});
  const ProbVec q({0.4, 0.4, 0.2});
  CHECK(divergence_csiszar([](double x) { return x * std::log(x); }, p, q) == doctest::Approx(kl(p, q)));
  double chi2 = 0.0;
  for (std::size_t i = 0; i < 3; ++i) chi2 += (p[i] - q[i]) * (p[i] - q[i]) / q[i];
  CHECK(divergence_csiszar([](double x) { return (x - 1) * (x - 1); }, p, q) == doctest::Approx(chi2));
  CHECK(divergence_csiszar([](double x) { return x * std::log(x); }, p, p) == doctest::Approx(0.0));

  auto negent = [](const ProbVec& v) {
    double s = 0.0;
    for (double x : v.probs()) s += x * std::log(x);
    return s;
  };
  auto negent_grad = [](const ProbVec& v) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) g(static_cast<Eigen::Index>(i)) = std::log(v[i]) + 1.0;
    return g;
  };
  CHECK(divergence_bregman(negent, negent_grad, p, q) == doctest::Approx(kl(p, q)));
  auto sq = [](const ProbVec& v) {
    double s = 0.0;
    for (double x : v.probs()) s += x * x;
    return s;
  };
  auto sq_grad = [](const ProbVec& v) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) g(static_cast<Eigen::Index>(i)) = 2 * v[i];
    return g;
  };
  double ssd = 0.0;
  for (std::size_t i = 0; i < 3; ++i) ssd += (p[i] - q[i]) * (p[i] - q[i]);
  CHECK(divergence_bregman(sq, sq_grad, p, q) == doctest::Approx(ssd));

  for (const auto& d : {tsallis(0.5), tsallis(2.0), cd_family(0.7, 0.4)}) {
    const auto [F, G] = naudts_potential(d);
    CHECK(divergence_bregman(F, G, p, q) == doctest::Approx(divergence_naudts(d, p, q)).epsilon(1e-9));
  }
}

TEST_CASE("metric values") {
  const ProbVec half({0.5, 0.5});
  CHECK(metric_naudts(identity(), half)(0, 0) == doctest::Approx(4.0));
  CHECK(metric_naudts(tsallis(2.0), half)(0, 0) == doctest::Approx(8.0));
  CHECK(metric_amari(identity(), half)(0, 0) == doctest::Approx(4.0));
  CHECK(metric_amari(tsallis(2.0), half)(0, 0) == doctest::Approx(16.0));
  const auto g = metric_naudts(tsallis(0.5), ProbVec::uniform(3));
  CHECK(g(0, 0) == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK(g(0, 1) == doctest::Approx(std::sqrt(3.0)));
  CHECK(g.positive_definite());
  const ProbVec p({0.2, 0.3, 0.5});
  const auto F = fisher_matrix(p);
  CHECK(F(0, 0) == doctest::Approx(1 / 0.3 + 1 / 0.2));
  CHECK(F(1, 1) == doctest::Approx(1 / 0.5 + 1 / 0.2));
  CHECK(F(0, 1) == doctest::Approx(1 / 0.2));
}

TEST_CASE("finite-difference Hessian oracle") {
  const ProbVec p({0.4, 0.6});
  auto fd = metric_fd_oracle([](const ProbVec& a, const ProbVec& b) { return kl(a, b); }, ProbVec({0.2, 0.3, 0.5}));
  CHECK(rel_diff(fd.entries, fisher_matrix(ProbVec({0.2, 0.3, 0.5})).entries) < 1e-5);

  const auto ts = tsallis(0.5);
  fd = metric_fd_oracle([&](const ProbVec& a, const ProbVec& b) { return divergence_naudts(ts, a, b); }, p);
  CHECK(rel_diff(fd.entries, metric_naudts(ts, p).entries) < 1e-5);
  const auto st = stretched(2.0);
  fd = metric_fd_oracle([&](const ProbVec& a, const ProbVec& b) { return divergence_amari(st, a, b); }, p);
  CHECK(rel_diff(fd.entries, metric_amari(st, p).entries) < 1e-5);
}

TEST_CASE("T operator") {
  CHECK(t_operator(tsallis(2.0), ProbVec({0.5, 0.5}))(0, 0) == doctest::Approx(16.0));
  Sampler s(5);
  for (const auto& d : {identity(), tsallis(0.5), tsallis(2.0), stretched(2.0), cd_family(0.7, 0.4)}) {
    for (int k = 0; k < 5; ++k) {
      const ProbVec p = s.simplex(3);
      CHECK((t_operator(d, p).entries - metric_amari(d, p).entries).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("Tsallis-Souza metric transform") {
  const ProbVec p({0.3, 0.7});
  CHECK(rel_diff(ts_metric_transform(tsallis(0.5), 0.0, p).entries, metric_naudts(tsallis(0.5), p).entries) < 1e-14);
  for (double q : {0.5, 0.8}) {
    const auto d = tsallis(q);
    CHECK(rel_diff(ts_metric_transform(d, 1 - q, p).entries, metric_naudts(ts_dual(d, 1 - q), p).entries) < 1e-8);
  }
  const ProbVec half({0.5, 0.5});
  const double w = (1.0 / 0.5) / std::pow(1.0 - 0.1 * std::log(0.5), 2);
  CHECK(ts_metric_transform(identity(), -0.1, half)(0, 0) == doctest::Approx(2.0 * w).epsilon(1e-9));
  CHECK_THROWS_AS(ts_metric_transform(identity(), 0.5, half), PoleError);
}

TEST_CASE("conformal duality") {
  const auto a = conformal_check(tsallis(0.5), ProbVec({0.3, 0.7}));
  CHECK(a.max_rel_residual < 1e-6);
  CHECK(a.conformal_factor.size() == 1);
  const auto b = conformal_check(cd_family(0.8, 0.5), ProbVec({0.25, 0.75}));
  CHECK(b.max_rel_residual < 1e-6);
}

TEST_CASE("Tsallis Amari metric is conformal to Fisher") {
  const ProbVec p({0.2, 0.3, 0.5});
  for (double q : {0.5, 2.0}) {
    const auto d = tsallis(q);
    const Eigen::MatrixXd scaled = h_phi(d, p) * metric_amari(d, p).entries;
    CHECK(rel_diff(scaled, q * fisher_matrix(p).entries) < 1e-12);
  }
}

TEST_CASE("additive duality collapse") {
  Sampler s(9);
  for (double q : {0.5, 0.8, 1.5}) {
    for (int k = 0; k < 50; ++k) {
      const ProbVec p = s.simplex(3);
      const double sn = entropy_naudts(tsallis(2.0 - q), p);
      const double sa = entropy_amari(tsallis(q), p);
      CHECK(sa == doctest::Approx((1.0 / (1.0 - q)) * (1.0 - 1.0 / (q * (1.0 + (1.0 - q) * sn)))).epsilon(1e-10));
    }
  }
}

TEST_CASE("(c,d) entropy closed form is c times the quadrature entropy") {
  for (auto [c, d] : {std::pair{0.7, 0.4}, {0.8, 0.5}}) {
    const auto params = CdParams::make(c, d);
    const ProbVec p({0.3, 0.7});
    const auto cmp = cd_entropy_compare(params, p);
    CHECK(cmp.scale == doctest::Approx(c).epsilon(1e-9));
    CHECK(cmp.residual_scaled < 1e-7);
    CHECK(cmp.residual_offset > 1e-4);
  }
  CHECK_THROWS_AS(cd_entropy_closed(CdParams::make(0.5, 0.0), ProbVec({0.3, 0.7})), BranchError);
}

TEST_CASE("(c,d) closed metrics") {
  const ProbVec p({1.0 / 3.0, 2.0 / 3.0});
  const auto m = cd_metrics_closed(CdParams::make(0.7, 0.4), p);
  CHECK(m.naudts_check.max_rel_residual < 1e-6);
  CHECK(m.amari_check.max_rel_residual < 1e-6);
  CHECK(m.amari_raw_residual > 1e-3);
  const auto m3 = cd_metrics_closed(CdParams::make(0.8, 0.5), ProbVec({0.2, 0.3, 0.5}));
  CHECK(m3.naudts_check.max_rel_residual < 1e-6);
  CHECK(m3.naudts_typeset_residual > 1e-6);

  const auto sh = cd_metrics_closed(CdParams::make(1.0, 1.0), p);
  CHECK(sh.naudts(0, 0) == doctest::Approx(4.5));
  CHECK(sh.amari(0, 0) == doctest::Approx(4.5));

  const ProbVec p3({0.2, 0.3, 0.5});
  const auto dz = cd_metrics_closed(CdParams::make(0.5, 0.0), p3);
  CHECK(rel_diff(dz.amari.entries, 1.5 * fisher_matrix(p3).entries) < 1e-12);
  const auto fam = cd_family(0.5, 0.0);
  CHECK(rel_diff(h_phi(fam, p3) * metric_amari(fam, p3).entries, 1.5 * fisher_matrix(p3).entries) < 1e-8);
}
