#pragma once

// One household's inputs, and the scenario document format:
//
//   F = 16240              # poverty line
//   P = 10390              # annual benchmark premium
//   Q = 10390              # annual premiums actually purchased
//   I = 71150              # relevant income before the deduction and d0
//   APTC = 0               # advance credit (optional, default 0)
//   d0 = 0                 # other above-the-line deductions (optional)
//   filing_status = single # single | other (optional)
//   tax_year = 2018
//   below_poverty_exception = false   (optional)
//   student_loan_k = 2500  # optional; enables the phase-out chaining

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptcfix/keyvalue.hpp"
#include "ptcfix/money.hpp"
#include "ptcfix/tax_year.hpp"

namespace ptcfix {

struct Scenario {
  Money poverty_line;         // F
  Money benchmark_premium;    // P
  Money purchased_premium;    // Q
  Money income;               // I
  Money advance_credit;       // APTC
  Money other_deductions;     // d0
  FilingStatus filing_status = FilingStatus::single;
  int tax_year = 2018;
  bool below_poverty_exception = false;
  std::optional<Money> student_loan_interest;  // k, capped at $2,500

  /// Premium balance actually billed: Q - APTC.  The deduction can never
  /// exceed it.
  Money billed_premium() const { return purchased_premium - advance_credit; }

  /// Throws DocumentError naming the violated field.
  void validate() const {
    if (poverty_line <= kZero) throw DocumentError("F", 0, "poverty line must be positive");
    if (benchmark_premium <= kZero) throw DocumentError("P", 0, "benchmark premium must be positive");
    if (purchased_premium <= kZero) throw DocumentError("Q", 0, "purchased premium must be positive");
    if (income < purchased_premium) throw DocumentError("I", 0, "income must be at least the purchased premium Q");
    if (advance_credit < kZero) throw DocumentError("APTC", 0, "advance credit must be nonnegative");
    if (advance_credit > purchased_premium) throw DocumentError("APTC", 0, "advance credit cannot exceed Q");
    if (other_deductions < kZero) throw DocumentError("d0", 0, "other deductions must be nonnegative");
    if (student_loan_interest) {
      if (*student_loan_interest < kZero || *student_loan_interest > Money::dollars(2500))
        throw DocumentError("student_loan_k", 0, "student loan amount must lie in [0, 2500]");
    }
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline Money scenario_money(const std::string& key, const KeyValueEntry& entry) {
  try {
    return Money::parse(entry.value);
  } catch (const std::exception& e) {
    throw DocumentError(key, entry.line, e.what());
  }
}

inline bool scenario_bool(const std::string& key, const KeyValueEntry& entry) {
  if (entry.value == "true" || entry.value == "yes" || entry.value == "1") return true;
  if (entry.value == "false" || entry.value == "no" || entry.value == "0") return false;
  throw DocumentError(key, entry.line, "expected true or false");
}

}  // namespace detail

inline constexpr std::string_view kScenarioKeys[] = {
    "F", "P", "Q", "I", "APTC", "d0", "filing_status", "tax_year", "below_poverty_exception", "student_loan_k"};

/// Builds a Scenario from parsed key-values.  `overrides` replace or add
/// keys one by one (they report line 0 on error).
inline Scenario scenario_from_key_values(KeyValueMap doc,
                                         const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
  for (const auto& [key, value] : overrides) doc[key] = KeyValueEntry{value, 0};

  for (const auto& [key, entry] : doc) {
    bool known = false;
    for (auto k : kScenarioKeys) known = known || key == k;
    if (!known) throw DocumentError(key, entry.line, "unknown scenario key");
  }

  Scenario s;
  s.poverty_line = detail::scenario_money("F", detail::require(doc, "F"));
  s.benchmark_premium = detail::scenario_money("P", detail::require(doc, "P"));
  s.purchased_premium = detail::scenario_money("Q", detail::require(doc, "Q"));
  s.income = detail::scenario_money("I", detail::require(doc, "I"));
  if (auto it = doc.find("APTC"); it != doc.end()) s.advance_credit = detail::scenario_money("APTC", it->second);
  if (auto it = doc.find("d0"); it != doc.end()) s.other_deductions = detail::scenario_money("d0", it->second);
  if (auto it = doc.find("filing_status"); it != doc.end()) {
    if (it->second.value == "single")
      s.filing_status = FilingStatus::single;
    else if (it->second.value == "other")
      s.filing_status = FilingStatus::other;
    else
      throw DocumentError("filing_status", it->second.line, "expected single or other");
  }
  {
    const auto& entry = detail::require(doc, "tax_year");
    try {
      std::size_t used = 0;
      s.tax_year = std::stoi(entry.value, &used);
      if (used != entry.value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DocumentError("tax_year", entry.line, "tax year must be an integer");
    }
  }
  if (auto it = doc.find("below_poverty_exception"); it != doc.end())
    s.below_poverty_exception = detail::scenario_bool("below_poverty_exception", it->second);
  if (auto it = doc.find("student_loan_k"); it != doc.end())
    s.student_loan_interest = detail::scenario_money("student_loan_k", it->second);

  try {
    s.validate();
  } catch (const DocumentError& e) {
    auto it = doc.find(e.key());
    throw DocumentError(e.key(), it == doc.end() ? 0 : it->second.line, e.message());
  }
  return s;
}

inline Scenario parse_scenario(std::string_view text,
                               const std::vector<std::pair<std::string, std::string>>& overrides = {}) {
  return scenario_from_key_values(parse_key_values(text), overrides);
}

inline std::string to_document(const Scenario& s) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out.append(key).append(" = ").append(value).push_back('\n');
  };
  line("F", s.poverty_line.str());
  line("P", s.benchmark_premium.str());
  line("Q", s.purchased_premium.str());
  line("I", s.income.str());
  line("APTC", s.advance_credit.str());
  line("d0", s.other_deductions.str());
  line("filing_status", std::string(to_string(s.filing_status)));
  line("tax_year", std::to_string(s.tax_year));
  line("below_poverty_exception", s.below_poverty_exception ? "true" : "false");
  if (s.student_loan_interest) line("student_loan_k", s.student_loan_interest->str());
  return out;
}

}  // namespace ptcfix
