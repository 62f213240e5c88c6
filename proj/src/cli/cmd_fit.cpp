#include <fstream>

#include "common.hpp"
#include "phigeo/error.hpp"
#include "phigeo/geometry.hpp"
#include "phigeo/maxent.hpp"

namespace phigeo::cli {

namespace {

struct FitArgs {
  FamilySpec family;
  std::string constraints = "linear";
  std::string config;
};

nlohmann::json vec_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

int run_fit(const FitArgs& a, std::ostream& out) {
  std::ifstream in(a.config);
  if (!in) throw DomainError("cannot open config file " + a.config);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.contains("E") || !cfg.contains("targets")) throw DomainError("config needs \"E\" and \"targets\"");
  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  try {
    rows = cfg.at("E").get<std::vector<std::vector<double>>>();
    targets = cfg.at("targets").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config has the wrong shape: ") + e.what());
  }
  const ConfigMatrix E = ConfigMatrix::from_rows(rows);
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(targets.data(), static_cast<Eigen::Index>(targets.size()));
  const Deformation d = make_family(a.family);
  const PhiExpFamily fam = a.constraints == "escort" ? fit_escort_moments(d, E, t) : fit_linear_moments(d, E, t);

  nlohmann::json j;
  j["family"] = d.name();
  j["constraints"] = a.constraints;
  j["theta"] = vec_json(fam.theta());
  j["psi"] = to_json(fam.massieu());
  j["normalizer"] = to_json(fam.psi());
  nlohmann::json pmf = nlohmann::json::array();
  for (double v : fam.pmf().probs()) pmf.push_back(to_json(v));
  j["pmf"] = pmf;
  if (fam.pmf().interior()) {
    j["eta"] = vec_json(eta_coords(fam));
    j["varphi"] = to_json(varphi_dual(fam).legendre_value);
    j["entropy_amari"] = to_json(entropy_amari(d, fam.pmf()));
  }
  try {
    j["entropy_naudts"] = to_json(entropy_naudts(d, fam.pmf()));
  } catch (const DivergentIntegral&) {
    j["entropy_naudts"] = "divergent";
  }
  j["linear_moments"] = vec_json(linear_moments(fam));
  out << j.dump(2) << "\n";
  return ok;
}

}  // namespace

Command setup_fit(CLI::App& root) {
  auto args = std::make_shared<FitArgs>();
  CLI::App* app = root.add_subcommand("fit", "Fit a phi-exponential family to moment targets");
  add_family_flags(*app, args->family);
  app->add_option("--constraints", args->constraints, "linear | escort")->check(CLI::IsMember({"linear", "escort"}));
  app->add_option("--config", args->config, "JSON file with \"E\" and \"targets\"")->required();
  return {app, [args](std::ostream& out, std::ostream&) { return run_fit(*args, out); }};
}

}  // namespace phigeo::cli
