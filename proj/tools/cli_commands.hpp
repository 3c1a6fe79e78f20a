#pragma once

// Subcommand implementations behind the ptcfix executable.  Kept separate
// from main() so tests can drive them in-process.
//
// Exit codes:
//   0  success (iterate: converged in the IRS sense)
//   2  invalid scenario or arguments
//   3  unknown tax year
//   4  iterate: diverged, "do not use the iterative calculation method"
//   5  iterate: iteration budget exhausted

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ptcfix/ptcfix.hpp"

namespace ptcfix::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitUnknownYear = 3;
inline constexpr int kExitDiverged = 4;
inline constexpr int kExitBudget = 5;

using json = nlohmann::ordered_json;

struct ScenarioSource {
  std::optional<std::string> scenario_file;
  std::vector<std::pair<std::string, std::string>> overrides;  // from --set key=value
  std::optional<std::string> params_file;
  RoundingMode rounding = RoundingMode::cent;
};

/// Thrown by resolve_context; carries the exit code to use.
class CommandError : public std::runtime_error {
 public:
  CommandError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

inline std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& sets) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : sets) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw CommandError(kExitInvalid, "--set expects key=value, got '" + item + "'");
    out.emplace_back(std::string(detail::trim(item.substr(0, eq))), std::string(detail::trim(item.substr(eq + 1))));
  }
  return out;
}

inline PtcContext resolve_context(const ScenarioSource& src) {
  Scenario scenario;
  try {
    std::string text;
    if (src.scenario_file) {
      std::ifstream in(*src.scenario_file);
      if (!in) throw CommandError(kExitInvalid, "cannot open scenario file " + *src.scenario_file);
      std::stringstream buffer;
      buffer << in.rdbuf();
      text = buffer.str();
    }
    scenario = parse_scenario(text, src.overrides);
  } catch (const DocumentError& e) {
    throw CommandError(kExitInvalid, std::string("invalid scenario: ") + e.what());
  }

  TaxYearParams params;
  if (src.params_file) {
    try {
      params = load_tax_year_file(*src.params_file);
    } catch (const DocumentError& e) {
      throw CommandError(kExitUnknownYear, std::string("invalid parameter file: ") + e.what());
    }
    if (params.year != scenario.tax_year)
      throw CommandError(kExitUnknownYear, "parameter file is for " + std::to_string(params.year) +
                                               ", scenario asks for " + std::to_string(scenario.tax_year));
  } else {
    try {
      params = builtin_tax_year(scenario.tax_year);
    } catch (const UnknownTaxYear& e) {
      throw CommandError(kExitUnknownYear, e.what());
    }
  }
  return PtcContext{scenario, params, src.rounding, false};
}

// ---------------------------------------------------------------- JSON

inline std::string amount(Money m) { return m.str(); }

inline json scenario_json(const Scenario& s) {
  json j;
  j["F"] = amount(s.poverty_line);
  j["P"] = amount(s.benchmark_premium);
  j["Q"] = amount(s.purchased_premium);
  j["I"] = amount(s.income);
  j["APTC"] = amount(s.advance_credit);
  j["d0"] = amount(s.other_deductions);
  j["filing_status"] = std::string(to_string(s.filing_status));
  j["tax_year"] = s.tax_year;
  j["below_poverty_exception"] = s.below_poverty_exception;
  if (s.student_loan_interest) j["student_loan_k"] = amount(*s.student_loan_interest);
  return j;
}

inline json limit_json(const RepaymentLimit& limit) {
  if (std::holds_alternative<Unlimited>(limit)) return "unlimited";
  return amount(std::get<Money>(limit));
}

inline json reconciliation_json(const NetOutcome& net) {
  json j;
  j["APTC"] = amount(net.advance);
  j["ptc"] = amount(net.credit);
  j["additional_credit"] = amount(net.additional_credit);
  j["repayment"] = amount(net.repayment);
  j["repayment_limit"] = limit_json(net.limit);
  j["total_benefit"] = net.total_benefit ? json(amount(*net.total_benefit)) : json(nullptr);
  return j;
}

inline json solution_json(const PtcContext& ctx, const Solution& sol, bool whole_dollars) {
  json j;
  j["d"] = amount(whole_dollars ? sol.whole_dollar_deduction : sol.deduction);
  j["ptc"] = amount(whole_dollars ? sol.whole_dollar_credit : sol.credit);
  j["method"] = std::string(to_string(sol.method));
  if (whole_dollars) {
    j["d_precise"] = amount(sol.deduction);
    j["ptc_precise"] = amount(sol.credit);
  }
  json cert;
  cert["Q"] = amount(ctx.scenario.purchased_premium);
  cert["g_d"] = amount(sol.certificate.constraint_at_d);
  cert["probe"] = sol.certificate.probe ? json(amount(*sol.certificate.probe)) : json("boundary");
  cert["g_probe"] = sol.certificate.constraint_at_probe ? json(amount(*sol.certificate.constraint_at_probe)) : json(nullptr);
  cert["holds"] = certificate_holds(ctx, sol);
  j["certificate"] = cert;
  j["upper_bound"] = amount(sol.upper_bound);
  j["iterations"] = sol.trace.empty() ? 0 : static_cast<int>(sol.trace.size()) - 1;
  return j;
}

inline json solve_report(const PtcContext& ctx, bool whole_dollars) {
  Solution sol = optimal_deduction(ctx);
  json j;
  j["scenario"] = scenario_json(ctx.scenario);
  j["mode"] = std::string(to_string(ctx.rounding));
  json solved = solution_json(ctx, sol, whole_dollars);
  for (auto& [key, value] : solved.items()) j[key] = value;
  j["reconciliation"] = reconciliation_json(reconcile(ctx, sol));
  return j;
}

inline json point_json(const IterationPoint& p) {
  return json{{"n", p.index}, {"C", amount(p.credit)}, {"D", amount(p.deduction)}};
}

inline json iterate_report(const PtcContext& ctx, const IterationOutcome& outcome, bool with_trace) {
  json j;
  j["scenario"] = scenario_json(ctx.scenario);
  j["mode"] = std::string(to_string(ctx.rounding));
  j["status"] = std::string(to_string(outcome.status));
  j["start_clamped"] = outcome.start_clamped;
  j["steps"] = static_cast<int>(outcome.trace.size()) - 1;
  j["settled"] = outcome.settled ? point_json(*outcome.settled) : json(nullptr);
  if (outcome.cycle) {
    json points = json::array();
    for (const auto& p : outcome.cycle->points) points.push_back(point_json(p));
    j["cycle"] = json{{"period", outcome.cycle->period()}, {"points", points}};
  } else {
    j["cycle"] = nullptr;
  }
  j["liminf_d"] = outcome.liminf_deduction ? json(amount(*outcome.liminf_deduction)) : json(nullptr);
  SimplifiedResult simple = simplified_method(ctx);
  j["simplified"] = json{{"d", amount(simple.deduction)}, {"ptc", amount(simple.credit)}};
  if (with_trace) {
    json trace = json::array();
    for (const auto& p : outcome.trace) trace.push_back(point_json(p));
    j["trace"] = trace;
  }
  return j;
}

inline json compare_report(const PtcContext& ctx) {
  IterationOutcome iter = run_iteration(ctx);
  SimplifiedResult simple = simplified_method(ctx);
  Solution sol = optimal_deduction(ctx);
  Money oracle_d = brute_force_max_feasible(ctx, kOneDollar);

  json rows = json::array();
  auto row = [&](const std::string& name, std::optional<Money> d, std::optional<Money> ptc, const std::string& note) {
    rows.push_back(json{{"method", name},
                        {"d", d ? json(amount(*d)) : json(nullptr)},
                        {"ptc", ptc ? json(amount(*ptc)) : json(nullptr)},
                        {"note", note}});
  };
  if (iter.status == IterationStatus::converged_irs_sense) {
    row("irs_iterative", iter.settled->deduction, iter.settled->credit, "converged in the IRS sense");
  } else {
    row("irs_iterative", std::nullopt, std::nullopt, std::string(to_string(iter.status)));
  }
  row("irs_simplified", simple.deduction, simple.credit, "D2 and C3");
  if (iter.liminf_deduction) {
    row("liminf_extension", *iter.liminf_deduction, ptc_of_deduction(ctx, *iter.liminf_deduction), "D0 = liminf D[n]");
  } else {
    row("liminf_extension", std::nullopt, std::nullopt, "no settled point or cycle");
  }
  row("bisection", sol.deduction, sol.credit, std::string(to_string(sol.method)));
  row("oracle", oracle_d, ptc_of_deduction(ctx, oracle_d), "$1 lattice scan");

  json j;
  j["scenario"] = scenario_json(ctx.scenario);
  j["mode"] = std::string(to_string(ctx.rounding));
  j["status"] = std::string(to_string(iter.status));
  j["methods"] = rows;
  j["benefit_gap"] = amount(sol.credit - simple.credit);
  return j;
}

// ---------------------------------------------------------------- text

inline std::string dollars(Money m) { return format_dollars(m, true); }

inline void print_solve_text(std::ostream& out, const json& r) {
  auto money = [](const json& v) { return v.is_string() ? format_dollars(Money::parse(v.get<std::string>()), true) : std::string("-"); };
  out << "method          " << r["method"].get<std::string>() << '\n';
  out << "deduction D     " << money(r["d"]) << '\n';
  out << "credit PTC(D)   " << money(r["ptc"]) << '\n';
  const json& c = r["certificate"];
  out << "certificate     D + PTC(D) = " << money(c["g_d"]) << " <= Q = " << money(c["Q"]);
  if (c["g_probe"].is_string())
    out << "; at " << money(c["probe"]) << ": " << money(c["g_probe"]) << " > Q";
  else
    out << "; D is the upper end of the range";
  out << (c["holds"].get<bool>() ? "  [holds]" : "  [FAILS]") << '\n';
  out << "search range    [$0.00, " << money(r["upper_bound"]) << "], " << r["iterations"].get<int>() << " bisections\n";
  const json& rec = r["reconciliation"];
  out << "reconciliation  APTC " << money(rec["APTC"]) << ", additional credit " << money(rec["additional_credit"])
      << ", repayment " << money(rec["repayment"]);
  if (rec["total_benefit"].is_string()) out << ", total benefit " << money(rec["total_benefit"]);
  out << '\n';
}

inline void print_iterate_text(std::ostream& out, const json& r) {
  auto money = [](const json& v) { return v.is_string() ? format_dollars(Money::parse(v.get<std::string>()), true) : std::string("-"); };
  out << "status          " << r["status"].get<std::string>() << '\n';
  if (r.contains("trace")) {
    out << "trace\n";
    for (const auto& p : r["trace"])
      out << "  n=" << std::setw(3) << p["n"].get<int>() << "  C=" << std::setw(12) << money(p["C"])
          << "  D=" << std::setw(12) << money(p["D"]) << '\n';
  }
  if (r["settled"].is_object())
    out << "settled         C=" << money(r["settled"]["C"]) << " D=" << money(r["settled"]["D"]) << '\n';
  if (r["cycle"].is_object()) {
    out << "cycle           period " << r["cycle"]["period"].get<int>() << ":";
    for (const auto& p : r["cycle"]["points"]) out << " (" << money(p["C"]) << ", " << money(p["D"]) << ")";
    out << '\n';
  }
  out << "liminf D0       " << money(r["liminf_d"]) << '\n';
  out << "simplified      D2=" << money(r["simplified"]["d"]) << " C3=" << money(r["simplified"]["ptc"]) << '\n';
  if (r["start_clamped"].get<bool>()) out << "note            D1 clamped to keep M(D1) >= F\n";
}

inline void print_compare_text(std::ostream& out, const json& r) {
  auto money = [](const json& v) { return v.is_string() ? format_dollars(Money::parse(v.get<std::string>()), true) : std::string("-"); };
  out << std::left << std::setw(18) << "method" << std::right << std::setw(14) << "deduction" << std::setw(14) << "credit"
      << "  note\n";
  for (const auto& row : r["methods"])
    out << std::left << std::setw(18) << row["method"].get<std::string>() << std::right << std::setw(14)
        << money(row["d"]) << std::setw(14) << money(row["ptc"]) << "  " << row["note"].get<std::string>() << '\n';
  out << "benefit gap (bisection - simplified): " << money(r["benefit_gap"]) << '\n';
}

// ---------------------------------------------------------------- commands

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const CommandError& e) {
    err << "error: " << e.what() << '\n';
    return e.code();
  } catch (const DocumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

inline int cmd_solve(const ScenarioSource& src, bool whole_dollars, bool as_json, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    PtcContext ctx = resolve_context(src);
    json report = solve_report(ctx, whole_dollars);
    if (as_json)
      out << report.dump(2) << '\n';
    else
      print_solve_text(out, report);
    return kExitOk;
  });
}

inline int cmd_iterate(const ScenarioSource& src, int max_iter, bool with_trace, bool as_json, std::ostream& out,
                       std::ostream& err) {
  return guarded(err, [&] {
    if (max_iter < 2) throw CommandError(kExitInvalid, "--max-iter must be at least 2");
    PtcContext ctx = resolve_context(src);
    IterationOutcome outcome = run_iteration(ctx, max_iter);
    json report = iterate_report(ctx, outcome, with_trace);
    if (as_json)
      out << report.dump(2) << '\n';
    else
      print_iterate_text(out, report);
    switch (outcome.status) {
      case IterationStatus::converged_irs_sense: return kExitOk;
      case IterationStatus::diverged_do_not_use: return kExitDiverged;
      case IterationStatus::budget_exhausted: return kExitBudget;
    }
    return kExitBudget;
  });
}

inline int cmd_compare(const ScenarioSource& src, bool as_json, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    PtcContext ctx = resolve_context(src);
    json report = compare_report(ctx);
    if (as_json)
      out << report.dump(2) << '\n';
    else
      print_compare_text(out, report);
    return kExitOk;
  });
}

struct ScanArgs {
  std::string from;
  std::string to;
  std::string step = "100";
  std::optional<std::string> out_path;
  bool cents = false;
  bool refine = false;
  unsigned threads = 0;
};

inline int cmd_scan(const ScenarioSource& src, const ScanArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    // The template needs some income to validate; the sweep replaces it.
    ScenarioSource templ_src = src;
    Money from, to, step;
    try {
      from = Money::parse(args.from);
      to = Money::parse(args.to);
      step = Money::parse(args.step);
    } catch (const std::invalid_argument& e) {
      throw CommandError(kExitInvalid, e.what());
    }
    templ_src.overrides.emplace_back("I", to.str());
    PtcContext ctx = resolve_context(templ_src);

    std::ofstream file;
    std::ostream* sink = &out;
    if (args.out_path) {
      file.open(*args.out_path);
      if (!file) throw CommandError(kExitInvalid, "cannot open output file " + *args.out_path);
      sink = &file;
    }
    *sink << kScanCsvHeader << '\n';
    ScanOptions opts{ctx.rounding, args.refine, args.threads};
    ScanSummary summary = scan_divergence(ctx.scenario, from, to, step, ctx.params, opts,
                                          [&](const ScanRecord& r) { write_scan_csv_row(*sink, r, args.cents); });
    sink->flush();

    err << "scanned " << summary.records << " incomes\n";
    if (summary.intervals.empty()) err << "no irs_diverges or equation_gap intervals\n";
    for (const auto& iv : summary.intervals) {
      err << to_string(iv.kind) << ": " << format_dollars(iv.from, false) << " .. " << format_dollars(iv.to, false)
          << " (" << iv.points << " points)";
      if (iv.refined_from || iv.refined_to) {
        err << ", refined " << format_dollars(iv.refined_from.value_or(iv.from), false) << " .. "
            << format_dollars(iv.refined_to.value_or(iv.to), false);
      }
      err << '\n';
    }
    return kExitOk;
  });
}

}  // namespace ptcfix::cli
