#include <atomic>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "common.hpp"
#include "phigeo/error.hpp"
#include "phigeo/geometry.hpp"

namespace phigeo::cli {

namespace {

struct FigureArgs {
  std::string which;
  std::string out = ".";
  double p_min = 0.01, p_max = 0.99, p_step = 0.0025;
  double c_min = 0.2, c_max = 1.4, c_step = 0.02;
  double d_min = -1.0, d_max = 2.0, d_step = 0.05;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write " + path.string());
  return f;
}

ProbVec two_point(double p) { return ProbVec({1.0 - p, p}); }

void fig1(const FigureArgs& a, std::ostream& out) {
  const std::vector<std::pair<double, double>> cds = {{1.0, 1.0}, {1.0, 0.5}, {0.5, 0.0}};
  std::vector<Deformation> fams;
  for (auto [c, d] : cds) fams.push_back(cd_family(c, d));
  const auto grid = make_grid(a.p_min, a.p_max, a.p_step);
  for (double p : grid)
    if (!(p > 0.0 && p < 1.0)) throw DomainError("fig1 grid must lie inside (0, 1)");

  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  auto fn = open_csv(dir / "fig1_naudts.csv");
  auto fa = open_csv(dir / "fig1_amari.csv");
  auto fc = open_csv(dir / "fig1_crbound.csv");
  auto tag = [](double c, double d) { return "c" + format_number(c) + "_d" + format_number(d); };
  fn << "p";
  fa << "p";
  fc << "p";
  for (auto [c, d] : cds) {
    fn << ",value_" << tag(c, d);
    fa << ",value_" << tag(c, d);
    fc << ",I_" << tag(c, d) << ",invI_" << tag(c, d);
  }
  fn << "\n";
  fa << "\n";
  fc << "\n";
  for (double p : grid) {
    const ProbVec pv = two_point(p);
    fn << format_number(p);
    fa << format_number(p);
    fc << format_number(p);
    for (const auto& d : fams) {
      double gn = kNaN, ga = kNaN, info = kNaN;
      try {
        gn = metric_naudts(d, pv)(0, 0);
        ga = metric_amari(d, pv)(0, 0);
        info = h_phi(d, pv) * gn;
      } catch (const std::exception&) {
      }
      fn << "," << format_number(gn);
      fa << "," << format_number(ga);
      fc << "," << format_number(info) << "," << format_number(1.0 / info);
    }
    fn << "\n";
    fa << "\n";
    fc << "\n";
  }
  out << "wrote " << grid.size() << " rows to " << (dir / "fig1_naudts.csv").string() << ", "
      << (dir / "fig1_amari.csv").string() << ", " << (dir / "fig1_crbound.csv").string() << "\n";
}

void fig2(const FigureArgs& a, std::ostream& out) {
  const auto cs = make_grid(a.c_min, a.c_max, a.c_step);
  const auto ds = make_grid(a.d_min, a.d_max, a.d_step);
  const ProbVec p({1.0 / 3.0, 2.0 / 3.0});
  const std::size_t total = cs.size() * ds.size();
  std::vector<double> gn(total, kNaN), ga(total, kNaN);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      try {
        const Deformation d = cd_family(cs[k / ds.size()], ds[k % ds.size()]);
        gn[k] = metric_naudts(d, p)(0, 0);
        ga[k] = metric_amari(d, p)(0, 0);
      } catch (const std::exception&) {
      }
    }
  };
  const unsigned nthreads = std::min<unsigned>(thread_cap(), static_cast<unsigned>(std::max<std::size_t>(total, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const std::filesystem::path dir(a.out);
  std::filesystem::create_directories(dir);
  auto fn = open_csv(dir / "fig2_naudts.csv");
  auto fa = open_csv(dir / "fig2_amari.csv");
  fn << "c,d,value\n";
  fa << "c,d,value\n";
  for (std::size_t k = 0; k < total; ++k) {
    const std::string key = format_number(cs[k / ds.size()]) + "," + format_number(ds[k % ds.size()]) + ",";
    fn << key << format_number(gn[k]) << "\n";
    fa << key << format_number(ga[k]) << "\n";
  }
  std::size_t failed = 0;
  for (double v : gn) failed += std::isnan(v) ? 1 : 0;
  out << "wrote " << total << " rows to " << (dir / "fig2_naudts.csv").string() << ", "
      << (dir / "fig2_amari.csv").string() << " (" << failed << " points not evaluable)\n";
}

}  // namespace

Command setup_figure(CLI::App& root) {
  auto args = std::make_shared<FigureArgs>();
  CLI::App* app = root.add_subcommand("figure", "Emit metric data for the (c,d) figures as CSV");
  app->add_option("--which", args->which, "fig1 | fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
  app->add_option("--out", args->out, "output directory");
  app->add_option("--p-min", args->p_min);
  app->add_option("--p-max", args->p_max);
  app->add_option("--p-step", args->p_step);
  app->add_option("--c-min", args->c_min);
  app->add_option("--c-max", args->c_max);
  app->add_option("--c-step", args->c_step);
  app->add_option("--d-min", args->d_min);
  app->add_option("--d-max", args->d_max);
  app->add_option("--d-step", args->d_step);
  return {app, [args](std::ostream& out, std::ostream&) {
            if (args->which == "fig1")
              fig1(*args, out);
            else
              fig2(*args, out);
            return int(ok);
          }};
}

}  // namespace phigeo::cli
