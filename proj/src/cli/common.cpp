#include "common.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "phigeo/error.hpp"

namespace phigeo::cli {

void add_family_flags(CLI::App& app, FamilySpec& spec) {
  app.add_option("--family", spec.family, "shannon | tsallis | stretched | cd | ts-dual")
      ->check(CLI::IsMember({"shannon", "tsallis", "stretched", "cd", "ts-dual"}));
  app.add_option("--base", spec.base, "base family of ts-dual")
      ->check(CLI::IsMember({"shannon", "tsallis", "stretched", "cd"}));
  app.add_option("--q", spec.q, "Tsallis exponent");
  app.add_option("--eta", spec.eta, "stretched exponent");
  app.add_option("--c", spec.c, "(c,d) exponent c");
  app.add_option("--d", spec.d, "(c,d) exponent d");
  app.add_option("--r", spec.r, "(c,d) scale; defaults to the auto_r rule");
  app.add_option("--nu", spec.nu, "Tsallis-Souza shift");
}

namespace {

double need(const std::optional<double>& v, const char* flag, const std::string& family) {
  if (!v) throw DomainError("family " + family + " requires " + flag);
  return *v;
}

Deformation make_plain(const std::string& family, const FamilySpec& s) {
  if (family == "shannon") return identity();
  if (family == "tsallis") return tsallis(need(s.q, "--q", family));
  if (family == "stretched") return stretched(need(s.eta, "--eta", family));
  if (family == "cd") return cd_family(need(s.c, "--c", family), need(s.d, "--d", family), s.r);
  throw DomainError("unknown family " + family);
}

}  // namespace

Deformation make_family(const FamilySpec& spec) {
  if (spec.family == "ts-dual") return ts_dual(make_plain(spec.base, spec), need(spec.nu, "--nu", "ts-dual"));
  return make_plain(spec.family, spec);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw DomainError("empty entry in list '" + text + "'");
    const std::string tok = item.substr(b, e - b + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) throw DomainError("not a number: '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

ProbVec parse_prob(const std::string& text) { return ProbVec(parse_list(text)); }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
    throw DomainError("grid needs finite lo <= hi and step > 0");
  const double span = (hi - lo) / step;
  const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
  if (count > 10'000'000) throw DomainError("grid too large");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  const double inv = 1.0 / step;
  const double inv_r = std::round(inv);
  if (std::abs(inv - inv_r) < 1e-9 && std::abs(lo * inv_r - std::round(lo * inv_r)) < 1e-9) {
    const double k0 = std::round(lo * inv_r);
    for (long i = 0; i < count; ++i) out.push_back((k0 + static_cast<double>(i)) / inv_r);
  } else {
    for (long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  }
  return out;
}

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PHIGEO_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return n;
}

nlohmann::json to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace phigeo::cli
