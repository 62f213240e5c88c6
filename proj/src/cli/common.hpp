#pragma once

#include <CLI11.hpp>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "phigeo/cli.hpp"
#include "phigeo/deform.hpp"
#include "phigeo/families.hpp"

namespace phigeo::cli {

struct FamilySpec {
  std::string family = "shannon";
  std::string base = "shannon";
  std::optional<double> q, eta, c, d, r, nu;
};

void add_family_flags(CLI::App& app, FamilySpec& spec);

/// Resolves the flags to a built-in constructor. DomainError on missing or
/// invalid parameters.
Deformation make_family(const FamilySpec& spec);

std::vector<double> parse_list(const std::string& text);
ProbVec parse_prob(const std::string& text);

/// 17 significant digits, "nan" for NaN.
std::string format_number(double v);

/// Grid min + i * step for i = 0 .. round((max - min) / step). When 1/step is
/// an integer the points are computed as k / (1/step) so that values such as
/// 1.0 are hit exactly.
std::vector<double> make_grid(double lo, double hi, double step);

/// Thread cap from PHIGEO_THREADS, defaulting to hardware concurrency.
unsigned thread_cap();

nlohmann::json to_json(double v);

struct Command {
  CLI::App* app = nullptr;
  std::function<int(std::ostream&, std::ostream&)> action;
};

Command setup_eval(CLI::App& root);
Command setup_verify(CLI::App& root);
Command setup_fit(CLI::App& root);
Command setup_figure(CLI::App& root);
Command setup_table2(CLI::App& root);

}  // namespace phigeo::cli
