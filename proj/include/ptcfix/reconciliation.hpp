#pragma once

// Settling advance payments against the final credit.  Excess advance
// payments are repaid up to a limit R(m) that depends on the income band:
//
//   R(m) = r for m < 2, s for 2 <= m < 3, t for 3 <= m < 4, unlimited above.

#include <optional>
#include <variant>

#include "ptcfix/applicable_figure.hpp"
#include "ptcfix/bisection.hpp"
#include "ptcfix/money.hpp"
#include "ptcfix/ptc_model.hpp"
#include "ptcfix/tax_year.hpp"

namespace ptcfix {

struct Unlimited {
  friend bool operator==(Unlimited, Unlimited) { return true; }
};

using RepaymentLimit = std::variant<Money, Unlimited>;

inline RepaymentLimit repayment_limitation(const Ratio& m, FilingStatus status, const RepaymentTable& table) {
  const auto limits = table.limits(status);
  if (m < Ratio(2)) return limits[0];
  if (m < Ratio(3)) return limits[1];
  if (m < Ratio(4)) return limits[2];
  return Unlimited{};
}

struct NetOutcome {
  Money credit;             // PTC(D)
  Money advance;            // APTC
  Money additional_credit;  // paid out at filing when PTC(D) >= APTC
  Money repayment;          // owed back when APTC > PTC(D)
  RepaymentLimit limit;
  /// APTC - repayment; defined only when APTC > PTC(D).
  std::optional<Money> total_benefit;
};

inline NetOutcome reconcile_amounts(Money advance, Money credit, const RepaymentLimit& limit) {
  NetOutcome out;
  out.credit = credit;
  out.advance = advance;
  out.limit = limit;
  if (credit >= advance) {
    out.additional_credit = credit - advance;
    return out;
  }
  Money excess = advance - credit;
  out.repayment = std::holds_alternative<Money>(limit) ? min(excess, std::get<Money>(limit)) : excess;
  out.total_benefit = advance - out.repayment;
  return out;
}

inline NetOutcome reconcile(const PtcContext& ctx, const Solution& solution) {
  const Scenario& s = ctx.scenario;
  Ratio m = poverty_ratio(household_income(ctx, solution.deduction), s.poverty_line);
  return reconcile_amounts(s.advance_credit, solution.credit,
                           repayment_limitation(m, s.filing_status, ctx.params.repayment));
}

}  // namespace ptcfix
