#pragma once

// The fixed-point iteration from current IRS guidance:
//
//   (C[n+1], D[n+1]) = G(C[n], D[n]) = (PTC(D[n]), Qb - PTC(D[n]))
//
// with Qb = Q - APTC, both coordinates rounded after every step.  The
// iteration "converges in the IRS sense" at the first n with
// ||P[n+1] - P[n]||_inf < $1.  Rounded iterates live on a finite lattice,
// so a run that never gets that close must eventually revisit a point;
// that revisit is the "do not use the iterative method" outcome.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "ptcfix/money.hpp"
#include "ptcfix/ptc_model.hpp"

namespace ptcfix {

struct IterationPoint {
  Money credit;     // C[n]
  Money deduction;  // D[n]
  int index = 1;    // n

  bool same_position(const IterationPoint& other) const {
    return credit == other.credit && deduction == other.deduction;
  }
  friend bool operator==(const IterationPoint&, const IterationPoint&) = default;
};

enum class IterationStatus { converged_irs_sense, diverged_do_not_use, budget_exhausted };

inline std::string_view to_string(IterationStatus status) {
  switch (status) {
    case IterationStatus::converged_irs_sense: return "converged_irs_sense";
    case IterationStatus::diverged_do_not_use: return "diverged_do_not_use";
    case IterationStatus::budget_exhausted: return "budget_exhausted";
  }
  return "budget_exhausted";
}

struct IterationCycle {
  std::vector<IterationPoint> points;  // one period, in trace order
  std::size_t period() const { return points.size(); }
};

struct IterationOutcome {
  IterationStatus status = IterationStatus::budget_exhausted;
  std::vector<IterationPoint> trace;
  std::optional<IterationPoint> settled;
  std::optional<Money> liminf_deduction;
  std::optional<IterationCycle> cycle;
  /// Start deduction was pulled below Qb to keep M(D1) >= F.
  bool start_clamped = false;
  /// Deductions are kept in [0, deduction_cap].
  Money deduction_cap;
};

struct IterationStart {
  IterationPoint point;
  bool clamped = false;
  Money cap;
};

inline constexpr int kDefaultMaxIterations = 500;

/// ($0, Qb) when M(Qb) >= F.  Otherwise D1 is clamped to the eligibility
/// limit min(Qb, I - d0 - F) so the first credit evaluation is in range.
/// Later deductions are held to [0, D1] as well.
inline IterationStart default_start(const PtcContext& ctx) {
  Money billed = ctx.scenario.billed_premium();
  auto limit = eligibility_limit(ctx);
  if (!limit || *limit >= billed) return {IterationPoint{kZero, billed, 1}, false, billed};
  Money d1 = max(kZero, *limit);
  return {IterationPoint{kZero, d1, 1}, true, d1};
}

namespace detail {

inline IterationPoint step_with_cap(const PtcContext& ctx, const IterationPoint& point, Money cap) {
  Money credit = ptc_of_deduction(ctx, point.deduction);
  Money deduction = round_money(ctx.scenario.billed_premium() - credit, ctx.rounding);
  deduction = std::clamp(deduction, kZero, cap);
  return IterationPoint{credit, deduction, point.index + 1};
}

inline Money sup_distance(const IterationPoint& a, const IterationPoint& b) {
  Money dc = a.credit - b.credit;
  Money dd = a.deduction - b.deduction;
  return max(max(dc, -dc), max(dd, -dd));
}

}  // namespace detail

/// One application of G.
inline IterationPoint step_credit_map(const PtcContext& ctx, const IterationPoint& point) {
  return detail::step_with_cap(ctx, point, default_start(ctx).cap);
}

inline IterationOutcome run_iteration(const PtcContext& ctx, const IterationPoint& start,
                                      int max_iter = kDefaultMaxIterations) {
  if (max_iter < 2) throw std::invalid_argument("run_iteration: max_iter must be at least 2");
  const IterationStart defaults = default_start(ctx);

  IterationOutcome out;
  out.start_clamped = defaults.clamped && start.same_position(defaults.point);
  out.deduction_cap = defaults.cap;
  out.trace.push_back(start);

  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> seen;
  seen.emplace(std::pair{start.credit.cents(), start.deduction.cents()}, 0);

  while (out.trace.size() < static_cast<std::size_t>(max_iter)) {
    const IterationPoint current = out.trace.back();
    IterationPoint next = detail::step_with_cap(ctx, current, defaults.cap);
    out.trace.push_back(next);

    if (detail::sup_distance(next, current) < kOneDollar) {
      out.status = IterationStatus::converged_irs_sense;
      out.settled = current;
      out.liminf_deduction = current.deduction;
      return out;
    }

    auto key = std::pair{next.credit.cents(), next.deduction.cents()};
    if (auto it = seen.find(key); it != seen.end()) {
      IterationCycle cycle;
      cycle.points.assign(out.trace.begin() + static_cast<std::ptrdiff_t>(it->second), out.trace.end() - 1);
      Money lowest = cycle.points.front().deduction;
      for (const auto& p : cycle.points) lowest = min(lowest, p.deduction);
      out.status = IterationStatus::diverged_do_not_use;
      out.cycle = std::move(cycle);
      out.liminf_deduction = lowest;
      return out;
    }
    seen.emplace(key, out.trace.size() - 1);
  }
  out.status = IterationStatus::budget_exhausted;
  return out;
}

inline IterationOutcome run_iteration(const PtcContext& ctx, int max_iter = kDefaultMaxIterations) {
  return run_iteration(ctx, default_start(ctx).point, max_iter);
}

struct SimplifiedResult {
  Money deduction;  // D2
  Money credit;     // C3
};

/// The simplified calculation method: take D2 as the deduction and C3 as
/// the credit.
inline SimplifiedResult simplified_method(const PtcContext& ctx) {
  const IterationStart start = default_start(ctx);
  IterationPoint p2 = detail::step_with_cap(ctx, start.point, start.cap);
  IterationPoint p3 = detail::step_with_cap(ctx, p2, start.cap);
  return {p2.deduction, p3.credit};
}

/// liminf of D[n]: the settled deduction, or the smallest deduction on the
/// detected cycle.  Refuses to guess for an exhausted run.
inline Money liminf_deduction(const IterationOutcome& outcome) {
  switch (outcome.status) {
    case IterationStatus::converged_irs_sense:
      return outcome.settled->deduction;
    case IterationStatus::diverged_do_not_use: {
      Money lowest = outcome.cycle->points.front().deduction;
      for (const auto& p : outcome.cycle->points) lowest = min(lowest, p.deduction);
      return lowest;
    }
    case IterationStatus::budget_exhausted:
      break;
  }
  throw std::logic_error("liminf_deduction: iteration neither settled nor cycled; raise max_iter");
}

}  // namespace ptcfix
