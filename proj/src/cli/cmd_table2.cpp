#include <cmath>

#include "common.hpp"
#include "phigeo/error.hpp"
#include "phigeo/geometry.hpp"

namespace phigeo::cli {

namespace {

struct Table2Args {
  double q = 0.5;
  double eta = 2.0;
  std::string p = "0.3,0.7";
  double x = 0.5;
};

nlohmann::json row(const std::string& name, double typeset, double computed, const std::string& note = "") {
  nlohmann::json r;
  r["row"] = name;
  r["typeset"] = to_json(typeset);
  r["computed"] = to_json(computed);
  const double scale = std::max({1.0, std::abs(typeset), std::abs(computed)});
  r["agree"] = std::abs(typeset - computed) <= 1e-9 * scale;
  if (!note.empty()) r["footnote"] = note;
  return r;
}

nlohmann::json tsallis_rows(double q, const ProbVec& p, double x) {
  const Deformation d = tsallis(q);
  double sum_2q = 0.0, sum_q = 0.0;
  for (double v : p.probs()) {
    sum_2q += std::pow(v, 2.0 - q);
    sum_q += std::pow(v, q);
  }
  nlohmann::json rows = nlohmann::json::array();
  rows.push_back(row("phi", std::pow(x, q), d.phi(x)));
  rows.push_back(row("log", (std::pow(x, 1.0 - q) - 1.0) / (1.0 - q), d.log(x)));
  rows.push_back(row("exp", std::pow(1.0 + (1.0 - q) * x, 1.0 / (1.0 - q)), d.exp(x)));
  rows.push_back(row("chi", x / q, d.phi(x) / d.phi_prime(x)));
  rows.push_back(row("entropy_naudts", (sum_2q / (2.0 - q) - 1.0) / (q - 1.0), entropy_naudts(d, p)));
  rows.push_back(row("entropy_amari", (1.0 / sum_q - 1.0) / (1.0 - q), entropy_amari(d, p),
                     "typeset entry has the opposite sign of -(1/h) sum phi log_phi"));
  return rows;
}

nlohmann::json stretched_rows(double eta, const ProbVec& p, double x) {
  const Deformation d = stretched(eta);
  const double lx = std::log(x);
  // Typeset powers of log(x) read as sign(log x) |log x|^a on (0, 1).
  auto spow = [](double l, double a) { return std::copysign(std::pow(std::abs(l), a), l); };
  double sum_gamma = 0.0, num = 0.0, den = 0.0;
  for (double v : p.probs()) {
    const double l = std::log(v);
    sum_gamma += specfun::upper_gamma((eta + 1.0) / eta, -l);
    num += v * l;
    den += v * std::pow(std::abs(l), 1.0 - 1.0 / eta);
  }
  nlohmann::json rows = nlohmann::json::array();
  rows.push_back(row("phi", x * eta * std::pow(std::abs(lx), 1.0 - 1.0 / eta), d.phi(x)));
  rows.push_back(row("log", spow(lx, 1.0 / eta), d.log(x)));
  rows.push_back(row("exp", std::exp(spow(x, eta)), d.exp(x)));
  rows.push_back(row("chi", x * eta * lx / ((eta - 1.0) + eta * lx), d.phi(x) / d.phi_prime(x)));
  rows.push_back(row("entropy_naudts", sum_gamma, entropy_naudts(d, p)));
  rows.push_back(row("entropy_amari", num / den, entropy_amari(d, p),
                     "typeset entry has the opposite sign of -(1/h) sum phi log_phi"));
  return rows;
}

}  // namespace

Command setup_table2(CLI::App& root) {
  auto args = std::make_shared<Table2Args>();
  CLI::App* app = root.add_subcommand("table2", "Tsallis and stretched rows, typeset vs computed");
  app->add_option("--q", args->q, "Tsallis exponent");
  app->add_option("--eta", args->eta, "stretched exponent");
  app->add_option("--p", args->p, "probability vector for the entropy rows");
  app->add_option("--x", args->x, "argument for the phi, log, exp and chi rows");
  return {app, [args](std::ostream& out, std::ostream&) {
            const ProbVec p = parse_prob(args->p);
            nlohmann::json j;
            j["x"] = args->x;
            j["p"] = p.probs();
            j["tsallis"] = {{"q", args->q}, {"rows", tsallis_rows(args->q, p, args->x)}};
            j["stretched"] = {{"eta", args->eta}, {"rows", stretched_rows(args->eta, p, args->x)}};
            out << j.dump(2) << "\n";
            return int(ok);
          }};
}

}  // namespace phigeo::cli
