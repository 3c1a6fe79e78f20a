#pragma once

// Premium tax credit as a function of the self-employed health insurance
// deduction d:
//
//   M(d)   = I - d0 - d  [- SL(d) when student-loan chaining is on]
//   m(d)   = M(d) / F                          (exact)
//   PTC(d) = min(Q, max(0, P - f(m) * M))      when 1 <= m <= 4
//          = 0                                 when m > 4
//          = 0 or f(1)-based                   when m < 1 (exception flag)
//
// Rounding follows the context's RoundingMode: the expected contribution
// f(m)*M is rounded first, then the clamped credit.  RoundingMode::none
// carries the exact value through and rounds once, to the cent.

#include <optional>
#include <stdexcept>

#include "ptcfix/applicable_figure.hpp"
#include "ptcfix/money.hpp"
#include "ptcfix/scenario.hpp"
#include "ptcfix/tax_year.hpp"

namespace ptcfix {

struct PtcContext {
  Scenario scenario;
  TaxYearParams params;
  RoundingMode rounding = RoundingMode::cent;
  /// Round f(m) to ten-thousandths like the printed tables do.
  bool quantize_figure = false;
};

inline PtcContext make_context(const Scenario& scenario, RoundingMode rounding = RoundingMode::cent) {
  scenario.validate();
  return PtcContext{scenario, builtin_tax_year(scenario.tax_year), rounding, false};
}

/// Phase-out of the student loan interest deduction between $70,000 and
/// $85,000 of MAGI.  k is the pre-phase-out amount.
inline Money student_loan_deduction(Money k, Money magi) {
  static constexpr Money kStart = Money::dollars(70'000);
  static constexpr Money kEnd = Money::dollars(85'000);
  if (k < kZero) throw std::domain_error("student loan amount must be nonnegative");
  if (magi <= kStart) return k;
  if (magi >= kEnd) return kZero;
  return round_cents(Ratio(wide{k.cents()} * (kEnd - magi).cents(), (kEnd - kStart).cents()), RoundingMode::cent);
}

/// M(d).  With student-loan chaining, MAGI for the phase-out is computed
/// with the deduction applied and the student loan deduction at zero; the
/// resulting SL is then subtracted once.
inline Money household_income(const PtcContext& ctx, Money deduction) {
  const Scenario& s = ctx.scenario;
  Money base = s.income - s.other_deductions - deduction;
  if (s.student_loan_interest) base -= student_loan_deduction(*s.student_loan_interest, base);
  return base;
}

namespace detail {

inline Ratio figure_for(const PtcContext& ctx, const Ratio& m) {
  Ratio clamped = m < Ratio(0) ? Ratio(0) : m;
  Ratio value = figure_unreduced(clamped, ctx.params.figure);
  if (ctx.quantize_figure) return Ratio(round_half_away(value.num() * 10000, value.den()), 10000);
  return value;
}

// m > 4, or m < 1 without the exception: no credit.
inline bool outside_credit_range(const PtcContext& ctx, Money household) {
  const Money f = ctx.scenario.poverty_line;
  if (wide{household.cents()} > wide{f.cents()} * 4) return true;
  return household < f && !ctx.scenario.below_poverty_exception;
}

}  // namespace detail

/// round(figure * M) under `rounding`.
inline Money expected_contribution(Money household, const Ratio& figure, RoundingMode rounding) {
  return round_cents(Ratio(figure.num() * household.cents(), figure.den()), rounding);
}

/// min(Q, max(0, P - f(m)*M)) for a household income inside the credit
/// range (1 <= m <= 4, or m < 1 under the below-poverty exception, where
/// f(1) applies).
inline Money ptc_base(const PtcContext& ctx, Money household) {
  const Scenario& s = ctx.scenario;
  Ratio m = poverty_ratio(household, s.poverty_line);
  if (m > Ratio(4)) throw std::domain_error("ptc_base: household income above 4x the poverty line");
  if (m < Ratio(1) && !s.below_poverty_exception)
    throw std::domain_error("ptc_base: household income below the poverty line without the exception");

  Ratio figure = detail::figure_for(ctx, m);

  if (ctx.rounding == RoundingMode::none) {
    Ratio raw = Ratio(wide{s.benchmark_premium.cents()} * figure.den() - figure.num() * household.cents(), figure.den());
    if (raw < Ratio(0)) return kZero;
    if (raw > s.purchased_premium.as_cents()) return s.purchased_premium;
    return round_cents(raw, RoundingMode::cent);
  }

  Money contribution = expected_contribution(household, figure, ctx.rounding);
  Money credit = min(s.purchased_premium, max(kZero, s.benchmark_premium - contribution));
  return round_money(credit, ctx.rounding);
}

/// PTC(d), zero outside the credit range.
inline Money ptc_of_deduction(const PtcContext& ctx, Money deduction) {
  Money household = household_income(ctx, deduction);
  if (detail::outside_credit_range(ctx, household)) return kZero;
  return ptc_base(ctx, household);
}

/// g(d) = d + PTC(d), the left side of the no-double-dipping constraint.
inline Money constraint_value(const PtcContext& ctx, Money deduction) {
  return deduction + ptc_of_deduction(ctx, deduction);
}

/// Unrounded credit in cents for an exact household income in cents.
/// Lets tests probe continuity below the cent lattice.
inline Ratio credit_exact(const PtcContext& ctx, const Ratio& household_cents) {
  const Scenario& s = ctx.scenario;
  Ratio m = household_cents / s.poverty_line.as_cents();
  if (m > Ratio(4)) return Ratio(0);
  if (m < Ratio(1) && !s.below_poverty_exception) return Ratio(0);
  Ratio figure = applicable_figure(m < Ratio(0) ? Ratio(0) : m, ctx.params.figure, ctx.quantize_figure);
  Ratio raw = s.benchmark_premium.as_cents() - figure * household_cents;
  if (raw < Ratio(0)) return Ratio(0);
  if (raw > s.purchased_premium.as_cents()) return s.purchased_premium.as_cents();
  return raw;
}

/// Largest deduction keeping M(d) >= F, or nullopt when even d = 0 leaves
/// the household below the poverty line.
inline std::optional<Money> eligibility_limit(const PtcContext& ctx) {
  const Scenario& s = ctx.scenario;
  if (household_income(ctx, kZero) < s.poverty_line) return std::nullopt;
  if (!s.student_loan_interest) return s.income - s.other_deductions - s.poverty_line;
  // M(d) is strictly decreasing in d; search the cent lattice.
  std::int64_t lo = 0;                  // M(lo) >= F
  std::int64_t hi = s.income.cents() + 1;  // M(hi) < F
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (household_income(ctx, Money::from_cents(mid)) >= s.poverty_line)
      lo = mid;
    else
      hi = mid;
  }
  return Money::from_cents(lo);
}

/// Right end b0 of the deduction range searched for the optimum:
/// Q - APTC, further capped at the eligibility limit unless the
/// below-poverty exception keeps the credit alive under F.
/// nullopt when the household is not credit eligible at all.
inline std::optional<Money> deduction_upper_bound(const PtcContext& ctx) {
  Money billed = ctx.scenario.billed_premium();
  if (ctx.scenario.below_poverty_exception) return billed;
  auto limit = eligibility_limit(ctx);
  if (!limit) return std::nullopt;
  return min(billed, *limit);
}

}  // namespace ptcfix
