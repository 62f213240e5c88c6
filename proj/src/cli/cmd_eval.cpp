#include "common.hpp"
#include "phigeo/error.hpp"
#include "phigeo/geometry.hpp"

namespace phigeo::cli {

namespace {

struct EvalArgs {
  FamilySpec family;
  std::string what;
  std::string p;
  std::string p2;
  std::optional<double> x;
};

nlohmann::json matrix_json(const MetricMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.dim(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json evaluate(const EvalArgs& a) {
  const Deformation d = make_family(a.family);
  auto x = [&] {
    if (!a.x) throw DomainError("--what " + a.what + " requires --x");
    return *a.x;
  };
  auto p = [&] {
    if (a.p.empty()) throw DomainError("--what " + a.what + " requires --p");
    return parse_prob(a.p);
  };
  auto p2 = [&] {
    if (a.p2.empty()) throw DomainError("--what " + a.what + " requires --p2");
    return parse_prob(a.p2);
  };
  const std::string& w = a.what;
  if (w == "log") return to_json(d.log(x()));
  if (w == "exp") return to_json(d.exp(x()));
  if (w == "phi") return to_json(d.phi(x()));
  if (w == "h") return to_json(h_phi(d, p()));
  if (w == "escort") {
    nlohmann::json arr = nlohmann::json::array();
    for (double v : escort(d, p()).probs()) arr.push_back(to_json(v));
    return arr;
  }
  if (w == "entropy-n") return to_json(entropy_naudts(d, p()));
  if (w == "entropy-a") return to_json(entropy_amari(d, p()));
  if (w == "divergence-n") return to_json(divergence_naudts(d, p(), p2()));
  if (w == "divergence-a") return to_json(divergence_amari(d, p(), p2()));
  if (w == "metric-n") return matrix_json(metric_naudts(d, p()));
  if (w == "metric-a") return matrix_json(metric_amari(d, p()));
  throw DomainError("unknown --what " + w);
}

}  // namespace

Command setup_eval(CLI::App& root) {
  auto args = std::make_shared<EvalArgs>();
  CLI::App* app = root.add_subcommand("eval", "Evaluate a single quantity for one family");
  add_family_flags(*app, args->family);
  app->add_option("--what", args->what, "quantity to evaluate")
      ->required()
      ->check(CLI::IsMember({"log", "exp", "phi", "escort", "h", "entropy-n", "entropy-a", "divergence-n",
                             "divergence-a", "metric-n", "metric-a"}));
  app->add_option("--p", args->p, "probability vector, comma separated");
  app->add_option("--p2", args->p2, "second probability vector for divergences");
  app->add_option("--x", args->x, "scalar argument");
  return {app, [args](std::ostream& out, std::ostream&) {
            nlohmann::json j;
            j["value"] = evaluate(*args);
            out << j.dump() << "\n";
            return int(ok);
          }};
}

}  // namespace phigeo::cli
