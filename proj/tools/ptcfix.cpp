#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_commands.hpp"

namespace {

struct CommonFlags {
  std::string scenario_file;
  std::vector<std::string> sets;
  std::string params_file;
  std::string mode = "cent";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("scenario", flags.scenario_file, "Scenario file (key = value lines)");
  cmd->add_option("--set", flags.sets, "Override a scenario key, e.g. --set I=71150 (repeatable)");
  cmd->add_option("--params", flags.params_file, "Tax-year parameter file instead of the bundled tables");
  cmd->add_option("--mode", flags.mode, "Rounding after each intermediate step")
      ->check(CLI::IsMember({"cent", "dollar", "none"}));
}

ptcfix::cli::ScenarioSource to_source(const CommonFlags& flags) {
  ptcfix::cli::ScenarioSource src;
  if (!flags.scenario_file.empty()) src.scenario_file = flags.scenario_file;
  if (!flags.params_file.empty()) src.params_file = flags.params_file;
  src.overrides = ptcfix::cli::parse_overrides(flags.sets);
  src.rounding = ptcfix::parse_rounding_mode(flags.mode);
  return src;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-employed health insurance deduction and premium tax credit solver"};
  app.require_subcommand(1);

  CommonFlags solve_flags, iterate_flags, compare_flags, scan_flags;
  bool whole_dollars = false, solve_json = false;
  int max_iter = ptcfix::kDefaultMaxIterations;
  bool with_trace = false, iterate_json = false, compare_json = false;
  ptcfix::cli::ScanArgs scan_args;
  std::string scan_out;

  auto* solve = app.add_subcommand("solve", "Optimal deduction by bisection, with certificate and reconciliation");
  add_common(solve, solve_flags);
  solve->add_flag("--whole-dollars", whole_dollars, "Report the deduction snapped down to whole dollars");
  solve->add_flag("--json", solve_json, "JSON report");

  auto* iterate = app.add_subcommand("iterate", "Run the IRS fixed-point iteration");
  add_common(iterate, iterate_flags);
  iterate->add_option("--max-iter", max_iter, "Iteration budget");
  iterate->add_flag("--trace", with_trace, "Print every iterate");
  iterate->add_flag("--json", iterate_json, "JSON report");

  auto* compare = app.add_subcommand("compare", "Side-by-side IRS methods, bisection and oracle");
  add_common(compare, compare_flags);
  compare->add_flag("--json", compare_json, "JSON report");

  auto* scan = app.add_subcommand("scan", "Sweep income and stream per-income results as CSV");
  add_common(scan, scan_flags);
  scan->add_option("--from", scan_args.from, "Lowest income")->required();
  scan->add_option("--to", scan_args.to, "Highest income")->required();
  scan->add_option("--step", scan_args.step, "Income step (at least $1)");
  scan->add_option("--out", scan_out, "CSV output file (default stdout)");
  scan->add_flag("--cents", scan_args.cents, "Amounts in cents precision instead of whole dollars");
  scan->add_flag("--refine", scan_args.refine, "Locate interval endpoints to $1");
  scan->add_option("--threads", scan_args.threads, "Worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return ptcfix::cli::cmd_solve(to_source(solve_flags), whole_dollars, solve_json, std::cout, std::cerr);
    if (*iterate)
      return ptcfix::cli::cmd_iterate(to_source(iterate_flags), max_iter, with_trace, iterate_json, std::cout, std::cerr);
    if (*compare) return ptcfix::cli::cmd_compare(to_source(compare_flags), compare_json, std::cout, std::cerr);
    if (*scan) {
      if (!scan_out.empty()) scan_args.out_path = scan_out;
      return ptcfix::cli::cmd_scan(to_source(scan_flags), scan_args, std::cout, std::cerr);
    }
  } catch (const ptcfix::cli::CommandError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ptcfix::cli::kExitInvalid;
  }
  return ptcfix::cli::kExitInvalid;
}
