#include <cmath>
#include <cstdio>
#include <functional>

#include "common.hpp"
#include "phigeo/error.hpp"
#include "phigeo/estimation.hpp"
#include "phigeo/geometry.hpp"
#include "phigeo/maxent.hpp"
#include "phigeo/sampling.hpp"

namespace phigeo::cli {

namespace {

struct Row {
  std::string suite;
  std::string check;
  double residual = 0.0;
  double tol = 0.0;
  std::string error;
  bool pass() const { return error.empty() && residual <= tol; }
};

struct Named {
  std::string label;
  std::function<Deformation()> make;
};

std::vector<Named> family_matrix() {
  return {
      {"shannon", [] { return identity(); }},
      {"tsallis(0.5)", [] { return tsallis(0.5); }},
      {"tsallis(2)", [] { return tsallis(2.0); }},
      {"stretched(0.5)", [] { return stretched(0.5); }},
      {"stretched(2)", [] { return stretched(2.0); }},
      {"cd(1,0.5)", [] { return cd_family(1.0, 0.5); }},
      {"cd(0.5,0)", [] { return cd_family(0.5, 0.0); }},
      {"cd(0.7,0.4)", [] { return cd_family(0.7, 0.4); }},
      {"cd(0.8,-0.5)", [] { return cd_family(0.8, -0.5); }},
  };
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
}

// Runs body, folding its maximum residual into one row; exceptions mark the row failed.
void record(std::vector<Row>& rows, const std::string& suite, const std::string& check, double tol,
            const std::function<double()>& body) {
  Row r{suite, check, 0.0, tol, {}};
  try {
    r.residual = body();
    if (std::isnan(r.residual)) r.error = "nan residual";
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  rows.push_back(std::move(r));
}

ConfigMatrix config_for(int n, int m) {
  if (n == 2) return ConfigMatrix::from_rows({{0.0}, {1.0}});
  if (m == 1) return ConfigMatrix::from_rows({{0.0}, {1.0}, {2.0}});
  return ConfigMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
}

Eigen::VectorXd random_theta(Sampler& s, int m) {
  Eigen::VectorXd th(m);
  for (int j = 0; j < m; ++j) th(j) = s.uniform(-0.5, 0.5);
  return th;
}

void suite_roundtrip(std::vector<Row>& rows, std::uint64_t) {
  for (const auto& f : family_matrix()) {
    const bool lambert = f.label == "cd(0.7,0.4)" || f.label == "cd(0.8,-0.5)";
    record(rows, "roundtrip", f.label, lambert ? 1e-8 : 1e-10, [&] {
      const Deformation d = f.make();
      double worst = 0.0;
      for (int k = 0; k <= 64; ++k) {
        const double x = std::pow(10.0, -6.0 + 8.0 * k / 64.0);
        if (x <= d.domain_lo() || x >= d.domain_hi()) continue;
        worst = std::max(worst, std::abs(d.exp(d.log(x)) - x) / x);
      }
      return worst;
    });
  }
}

void suite_metrics_fd(std::vector<Row>& rows, std::uint64_t seed) {
  for (const auto& f : family_matrix()) {
    for (int n : {2, 3, 5}) {
      const std::string tag = f.label + " n=" + std::to_string(n);
      record(rows, "metrics-fd", "naudts " + tag, 1e-4, [&] {
        const Deformation d = f.make();
        Sampler s(seed + static_cast<std::uint64_t>(n));
        double worst = 0.0;
        for (int k = 0; k < 3; ++k) {
          const ProbVec p = s.simplex(static_cast<std::size_t>(n));
          const auto fd = metric_fd_oracle([&](const ProbVec& a, const ProbVec& b) { return divergence_naudts(d, a, b); }, p);
          worst = std::max(worst, rel(metric_naudts(d, p).entries, fd.entries));
        }
        return worst;
      });
      record(rows, "metrics-fd", "amari " + tag, 1e-4, [&] {
        const Deformation d = f.make();
        Sampler s(seed + static_cast<std::uint64_t>(n));
        double worst = 0.0;
        for (int k = 0; k < 3; ++k) {
          const ProbVec p = s.simplex(static_cast<std::size_t>(n));
          const auto fd = metric_fd_oracle([&](const ProbVec& a, const ProbVec& b) { return divergence_amari(d, a, b); }, p);
          worst = std::max(worst, rel(metric_amari(d, p).entries, fd.entries));
        }
        return worst;
      });
    }
  }
}

void suite_t_operator(std::vector<Row>& rows, std::uint64_t seed) {
  for (const auto& f : family_matrix()) {
    record(rows, "t-operator", f.label, 1e-10, [&] {
      const Deformation d = f.make();
      Sampler s(seed);
      double worst = 0.0;
      for (int n : {2, 3, 5})
        for (int k = 0; k < 5; ++k) {
          const ProbVec p = s.simplex(static_cast<std::size_t>(n));
          worst = std::max(worst, rel(t_operator(d, p).entries, metric_amari(d, p).entries));
        }
      return worst;
    });
  }
}

void suite_conformal(std::vector<Row>& rows, std::uint64_t seed) {
  const std::vector<Named> chis = {{"tsallis(0.5)", [] { return tsallis(0.5); }},
                                   {"tsallis(2)", [] { return tsallis(2.0); }},
                                   {"cd(0.8,0.5)", [] { return cd_family(0.8, 0.5); }}};
  for (const auto& f : chis) {
    record(rows, "conformal", f.label, 1e-6, [&] {
      const Deformation chi = f.make();
      Sampler s(seed);
      double worst = 0.0;
      for (int n : {2, 3})
        for (int k = 0; k < 3; ++k) worst = std::max(worst, conformal_check(chi, s.simplex(static_cast<std::size_t>(n))).max_rel_residual);
      return worst;
    });
  }
}

void suite_ts_duality(std::vector<Row>& rows, std::uint64_t seed) {
  for (double q : {0.5, 0.8}) {
    const std::string tag = "tsallis(" + format_number(q) + ") nu=" + format_number(1.0 - q);
    record(rows, "ts-duality", "metric " + tag, 1e-8, [&] {
      const Deformation d = tsallis(q);
      const Deformation ts = ts_dual(d, 1.0 - q);
      Sampler s(seed);
      double worst = 0.0;
      for (int n : {2, 3})
        for (int k = 0; k < 5; ++k) {
          const ProbVec p = s.simplex(static_cast<std::size_t>(n));
          worst = std::max(worst, rel(ts_metric_transform(d, 1.0 - q, p).entries, metric_naudts(ts, p).entries));
        }
      return worst;
    });
    record(rows, "ts-duality", "entropy " + tag, 1e-14, [&] {
      const Deformation d = tsallis(q);
      Sampler s(seed);
      double worst = 0.0;
      for (int k = 0; k < 10; ++k) {
        const ProbVec p = s.simplex(3);
        double direct = 0.0;
        for (double v : p.probs()) direct += (std::pow(v, q) - v) / (1.0 - q);
        worst = std::max(worst, std::abs(entropy_from_phi_nu(d, 1.0 - q, p) - direct));
      }
      return worst;
    });
  }
}

void suite_cr_bound(std::vector<Row>& rows, std::uint64_t seed) {
  for (const auto& f : family_matrix()) {
    const ConfigMatrix E = config_for(3, 1);
    const Estimator est = Estimator::from_config(E);
    record(rows, "cr-bound", "slack >= 0 " + f.label, 1e-10, [&] {
      const Deformation d = f.make();
      Sampler s(seed);
      double worst = 0.0;
      for (int t = 0; t < 3; ++t) {
        const PhiExpFamily fam = normalize(d, E, random_theta(s, 1));
        for (int k = 0; k < 100; ++k) worst = std::max(worst, -cr_report(fam, s.simplex(3, 0.01), est, 0, 0).slack);
      }
      return worst;
    });
    record(rows, "cr-bound", "equality at escort " + f.label, 1e-8, [&] {
      const Deformation d = f.make();
      Sampler s(seed);
      double worst = 0.0;
      for (int t = 0; t < 3; ++t) {
        const PhiExpFamily fam = normalize(d, E, random_theta(s, 1));
        worst = std::max(worst, std::abs(cr_report(fam, escort(d, fam.pmf()), est, 0, 0).slack));
      }
      return worst;
    });
  }
}

void suite_identities(std::vector<Row>& rows, std::uint64_t seed) {
  const std::vector<Named> fams = {{"shannon", [] { return identity(); }},
                                   {"tsallis(0.5)", [] { return tsallis(0.5); }},
                                   {"tsallis(2)", [] { return tsallis(2.0); }},
                                   {"stretched(2)", [] { return stretched(2.0); }},
                                   {"cd(0.8,0.5)", [] { return cd_family(0.8, 0.5); }}};
  const std::vector<std::pair<int, int>> shapes = {{2, 1}, {3, 1}, {3, 2}};
  for (const auto& f : fams) {
    for (auto [n, m] : shapes) {
      const std::string tag = f.label + " (n,m)=(" + std::to_string(n) + "," + std::to_string(m) + ")";
      record(rows, "identities", "naudts " + tag, 1e-6, [&, n = n, m = m] {
        Sampler s(seed);
        return naudts_identity_check(normalize(f.make(), config_for(n, m), random_theta(s, m))).max_rel_residual;
      });
      record(rows, "identities", "amari " + tag, 1e-5, [&, n = n, m = m] {
        Sampler s(seed);
        return amari_identity_check(normalize(f.make(), config_for(n, m), random_theta(s, m))).max_rel_residual;
      });
    }
  }
}

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 1;
};

}  // namespace

Command setup_verify(CLI::App& root) {
  auto args = std::make_shared<VerifyArgs>();
  CLI::App* app = root.add_subcommand("verify", "Run property suites across the built-in families");
  app->add_option("--suite", args->suite, "suite name")
      ->check(CLI::IsMember({"roundtrip", "metrics-fd", "conformal", "t-operator", "ts-duality", "cr-bound",
                             "identities", "all"}));
  app->add_option("--seed", args->seed, "seed for random points");
  return {app, [args](std::ostream& out, std::ostream&) {
            using Suite = void (*)(std::vector<Row>&, std::uint64_t);
            const std::vector<std::pair<std::string, Suite>> suites = {
                {"roundtrip", suite_roundtrip},   {"metrics-fd", suite_metrics_fd}, {"conformal", suite_conformal},
                {"t-operator", suite_t_operator}, {"ts-duality", suite_ts_duality}, {"cr-bound", suite_cr_bound},
                {"identities", suite_identities}};
            std::vector<Row> rows;
            for (const auto& [name, fn] : suites)
              if (args->suite == "all" || args->suite == name) fn(rows, args->seed);
            int failed = 0;
            char line[512];
            std::snprintf(line, sizeof line, "%-12s %-44s %-12s %-8s %s\n", "suite", "check", "residual", "tol", "status");
            out << line;
            for (const auto& r : rows) {
              std::snprintf(line, sizeof line, "%-12s %-44s %-12.3e %-8.0e %s\n", r.suite.c_str(), r.check.c_str(),
                            r.residual, r.tol, r.pass() ? "PASS" : "FAIL");
              out << line;
              if (!r.error.empty()) out << "    error: " << r.error << "\n";
              if (!r.pass()) ++failed;
            }
            out << rows.size() - static_cast<std::size_t>(failed) << "/" << rows.size() << " checks passed\n";
            return failed == 0 ? int(ok) : int(verify_failed);
          }};
}

}  // namespace phigeo::cli
