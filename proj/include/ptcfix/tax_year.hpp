#pragma once

// Per-year parameters: the applicable-figure knots and the repayment
// limitation triple.  Stored as small versioned key-value documents:
//
//   schema_version = 1
//   year = 2019
//   figure.j = 0.0208      # ten-thousandth precision
//   ...
//   repay.single.r = 300   # whole dollars
//   repay.single.s = 800
//   repay.single.t = 1325
//
// Non-single filers get twice the single limits unless the document also
// carries repay.other.r|s|t.

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "ptcfix/applicable_figure.hpp"
#include "ptcfix/keyvalue.hpp"
#include "ptcfix/money.hpp"

namespace ptcfix {

inline constexpr int kSchemaVersion = 1;

enum class FilingStatus { single, other };

inline std::string_view to_string(FilingStatus status) {
  return status == FilingStatus::single ? "single" : "other";
}

struct RepaymentTable {
  std::array<Money, 3> single{};                  // r, s, t
  std::optional<std::array<Money, 3>> other;      // explicit override of the doubling rule

  std::array<Money, 3> limits(FilingStatus status) const {
    if (status == FilingStatus::single) return single;
    if (other) return *other;
    return {single[0] * 2, single[1] * 2, single[2] * 2};
  }

  void validate() const {
    auto check = [](const std::array<Money, 3>& triple, const std::string& prefix) {
      if (triple[0] <= kZero) throw std::invalid_argument(prefix + ".r must be positive");
      if (triple[1] < triple[0]) throw std::invalid_argument(prefix + ".s is smaller than " + prefix + ".r");
      if (triple[2] < triple[1]) throw std::invalid_argument(prefix + ".t is smaller than " + prefix + ".s");
    };
    check(single, "repay.single");
    if (other) check(*other, "repay.other");
  }

  friend bool operator==(const RepaymentTable&, const RepaymentTable&) = default;
};

struct TaxYearParams {
  int year = 0;
  FigureTable figure;
  RepaymentTable repayment;

  friend bool operator==(const TaxYearParams&, const TaxYearParams&) = default;
};

namespace detail {

inline const KeyValueEntry& require(const KeyValueMap& doc, const std::string& key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw DocumentError(key, 0, "missing required key");
  return it->second;
}

inline std::int32_t parse_figure_knot(const std::string& key, const KeyValueEntry& entry) {
  Ratio value;
  try {
    value = parse_decimal(entry.value);
  } catch (const std::invalid_argument& e) {
    throw DocumentError(key, entry.line, e.what());
  }
  Ratio scaled = value * Ratio(10000);
  if (scaled.den() != 1) throw DocumentError(key, entry.line, "figure values are limited to ten-thousandth precision");
  if (scaled.num() <= 0 || scaled.num() >= 10000) throw DocumentError(key, entry.line, "figure value must lie in (0, 1)");
  return static_cast<std::int32_t>(scaled.num());
}

inline Money parse_whole_dollars(const std::string& key, const KeyValueEntry& entry) {
  Ratio value;
  try {
    value = parse_decimal(entry.value);
  } catch (const std::invalid_argument& e) {
    throw DocumentError(key, entry.line, e.what());
  }
  Ratio whole = value.reduced();
  if (whole.den() != 1) throw DocumentError(key, entry.line, "repayment limits are whole dollars");
  if (whole.num() <= 0 || whole.num() > 1'000'000'000) throw DocumentError(key, entry.line, "repayment limit out of range");
  return Money::dollars(static_cast<std::int64_t>(whole.num()));
}

inline std::optional<std::array<Money, 3>> parse_triple(const KeyValueMap& doc, const std::string& prefix, bool required) {
  static constexpr std::array<const char*, 3> names = {"r", "s", "t"};
  bool any = false;
  for (const char* n : names) any = any || doc.contains(prefix + "." + n);
  if (!any && !required) return std::nullopt;
  std::array<Money, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    std::string key = prefix + "." + names[i];
    out[i] = parse_whole_dollars(key, require(doc, key));
  }
  return out;
}

}  // namespace detail

/// Parses and validates a parameter document.  Throws DocumentError.
inline TaxYearParams load_tax_year_params(std::string_view text) {
  KeyValueMap doc = parse_key_values(text);

  static const std::array<std::string, 11> known = {
      "schema_version", "year",           "figure.j",       "figure.k",       "figure.l",      "figure.a",
      "figure.b",       "figure.c",       "repay.single.r", "repay.single.s", "repay.single.t"};
  for (const auto& [key, entry] : doc) {
    bool ok = std::find(known.begin(), known.end(), key) != known.end() || key == "repay.other.r" ||
              key == "repay.other.s" || key == "repay.other.t";
    if (!ok) throw DocumentError(key, entry.line, "unknown key");
  }

  const auto& version = detail::require(doc, "schema_version");
  if (version.value != std::to_string(kSchemaVersion))
    throw DocumentError("schema_version", version.line, "unsupported schema version '" + version.value + "'");

  TaxYearParams params;
  const auto& year = detail::require(doc, "year");
  try {
    std::size_t used = 0;
    params.year = std::stoi(year.value, &used);
    if (used != year.value.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw DocumentError("year", year.line, "year must be an integer");
  }

  for (std::size_t i = 0; i < 6; ++i) {
    std::string key = std::string("figure.") + FigureTable::kNames[i];
    params.figure.knots[i] = detail::parse_figure_knot(key, detail::require(doc, key));
  }
  params.repayment.single = *detail::parse_triple(doc, "repay.single", true);
  params.repayment.other = detail::parse_triple(doc, "repay.other", false);

  try {
    params.figure.validate();
  } catch (const std::invalid_argument& e) {
    std::string what = e.what();
    std::string key = what.substr(0, what.find(' '));
    auto it = doc.find(key);
    throw DocumentError(key, it == doc.end() ? 0 : it->second.line, what);
  }
  try {
    params.repayment.validate();
  } catch (const std::invalid_argument& e) {
    std::string what = e.what();
    std::string key = what.substr(0, what.find(' '));
    auto it = doc.find(key);
    throw DocumentError(key, it == doc.end() ? 0 : it->second.line, what);
  }
  return params;
}

inline TaxYearParams load_tax_year_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("", 0, "cannot open parameter file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_tax_year_params(buffer.str());
}

inline std::string to_document(const TaxYearParams& params) {
  std::ostringstream out;
  out << "schema_version = " << kSchemaVersion << '\n';
  out << "year = " << params.year << '\n';
  for (std::size_t i = 0; i < 6; ++i)
    out << "figure." << FigureTable::kNames[i] << " = " << params.figure.knot(i).to_decimal(4) << '\n';
  static constexpr std::array<const char*, 3> names = {"r", "s", "t"};
  for (std::size_t i = 0; i < 3; ++i)
    out << "repay.single." << names[i] << " = " << params.repayment.single[i].as_dollars().to_decimal(0) << '\n';
  if (params.repayment.other) {
    for (std::size_t i = 0; i < 3; ++i)
      out << "repay.other." << names[i] << " = " << (*params.repayment.other)[i].as_dollars().to_decimal(0) << '\n';
  }
  return out.str();
}

/// Bundled parameter documents, identical to data/tax_years/*.params.
inline const std::map<int, std::string_view>& builtin_tax_year_documents() {
  static const std::map<int, std::string_view> docs = {
      {2018,
       "# Applicable figures and repayment limitations, tax year 2018.\n"
       "schema_version = 1\n"
       "year = 2018\n"
       "figure.j = 0.0201\n"
       "figure.k = 0.0302\n"
       "figure.l = 0.0403\n"
       "figure.a = 0.0634\n"
       "figure.b = 0.0810\n"
       "figure.c = 0.0956\n"
       "repay.single.r = 300\n"
       "repay.single.s = 775\n"
       "repay.single.t = 1300\n"},
      {2019,
       "# Applicable figures and repayment limitations, tax year 2019.\n"
       "schema_version = 1\n"
       "year = 2019\n"
       "figure.j = 0.0208\n"
       "figure.k = 0.0311\n"
       "figure.l = 0.0415\n"
       "figure.a = 0.0654\n"
       "figure.b = 0.0836\n"
       "figure.c = 0.0986\n"
       "repay.single.r = 300\n"
       "repay.single.s = 800\n"
       "repay.single.t = 1325\n"},
  };
  return docs;
}

/// Thrown when no parameters exist for a requested year.
class UnknownTaxYear : public std::runtime_error {
 public:
  explicit UnknownTaxYear(int year)
      : std::runtime_error("no parameters for tax year " + std::to_string(year)), year_(year) {}
  int year() const { return year_; }

 private:
  int year_;
};

inline TaxYearParams builtin_tax_year(int year) {
  const auto& docs = builtin_tax_year_documents();
  auto it = docs.find(year);
  if (it == docs.end()) throw UnknownTaxYear(year);
  return load_tax_year_params(it->second);
}

}  // namespace ptcfix
