#include <vector>

#include "common.hpp"
#include "phigeo/error.hpp"

namespace phigeo::cli {

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"phigeo: phi-deformed entropies, Fisher metrics and their dualities", "phigeo"};
  app.require_subcommand(1);
  std::vector<Command> commands = {setup_eval(app), setup_verify(app), setup_fit(app), setup_figure(app),
                                   setup_table2(app)};
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  for (auto& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      return cmd.action(out, err);
    } catch (const InfeasibleTarget& e) {
      err << "infeasible: " << e.what() << "\n";
      return infeasible;
    } catch (const NonConvergence& e) {
      err << "non-convergence: " << e.what() << "\n";
      return non_convergence;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return usage;
    }
  }
  err << "error: no subcommand\n";
  return usage;
}

}  // namespace phigeo::cli
