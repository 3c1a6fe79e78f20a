#pragma once

// Threshold search by bisection for monotone increasing, left-continuous
// maps, and its use to find the optimal deduction
//
//   D = max { d in [0, b0] : d + PTC(d) <= Q }.
//
// The search keeps g(a) <= k < g(b) and halves [a, b] until it is no
// wider than the tolerance, then returns a.  Jumps in g are harmless:
// left continuity means the supremum of the feasible set is itself
// feasible, which is exactly what a converges to.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ptcfix/money.hpp"
#include "ptcfix/ptc_model.hpp"

namespace ptcfix {

/// [a_n, b_n] after n halvings.
struct BisectionBracket {
  Money lo;
  Money hi;
  friend bool operator==(const BisectionBracket&, const BisectionBracket&) = default;
};

template <class Fn>
struct ThresholdProblem {
  Fn g;
  Money lo;
  Money hi;
  Money threshold;
  Money tolerance = kOneCent;
  RoundingMode midpoint_rounding = RoundingMode::cent;
};

template <class Fn>
ThresholdProblem(Fn, Money, Money, Money, Money, RoundingMode) -> ThresholdProblem<Fn>;

struct ThresholdResult {
  Money value;
  std::vector<BisectionBracket> trace;
  int evaluations = 0;
  /// g(hi) <= k, so hi itself was returned without bisecting.
  bool upper_feasible = false;
};

/// g(lo) > k: there is nothing feasible to converge to.
class ThresholdPreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <class Fn>
ThresholdResult threshold_search(const ThresholdProblem<Fn>& p) {
  if (p.lo > p.hi) throw std::invalid_argument("threshold_search: lo > hi");
  if (p.tolerance < kOneCent) throw std::invalid_argument("threshold_search: tolerance below one cent");

  ThresholdResult result;
  auto g = [&](Money x) {
    ++result.evaluations;
    return p.g(x);
  };

  if (g(p.lo) > p.threshold) throw ThresholdPreconditionError("threshold_search: g(lo) exceeds the threshold");
  if (g(p.hi) <= p.threshold) {
    result.value = p.hi;
    result.upper_feasible = true;
    result.trace.push_back({p.hi, p.hi});
    return result;
  }

  Money a = p.lo;
  Money b = p.hi;
  result.trace.push_back({a, b});
  while (b - a > p.tolerance) {
    Money c = round_cents(Ratio(wide{a.cents()} + b.cents(), 2), p.midpoint_rounding);
    if (c <= a || c >= b) c = a + Money::from_cents((b - a).cents() / 2);
    if (g(c) <= p.threshold)
      a = c;
    else
      b = c;
    result.trace.push_back({a, b});
  }
  result.value = a;
  return result;
}

enum class SolutionMethod { bisection, boundary_b0, ineligible_full_deduction };

inline std::string_view to_string(SolutionMethod method) {
  switch (method) {
    case SolutionMethod::bisection: return "bisection";
    case SolutionMethod::boundary_b0: return "boundary_b0";
    case SolutionMethod::ineligible_full_deduction: return "ineligible_full_deduction";
  }
  return "bisection";
}

/// Evidence that d is the largest feasible deduction, recomputed from the
/// model rather than copied out of the search.
struct Certificate {
  Money constraint_at_d;                     // g(d) <= Q
  std::optional<Money> probe;                // min(d + $1, b0); absent at a boundary
  std::optional<Money> constraint_at_probe;  // g(probe) > Q
};

struct SolverOptions {
  Money tolerance = kOneCent;
  RoundingMode midpoint_rounding = RoundingMode::cent;

  /// Dollar rounding selects whole-dollar midpoints and a $1 tolerance,
  /// which reproduces hand computation; anything else works to the cent.
  static SolverOptions for_rounding(RoundingMode rounding) {
    if (rounding == RoundingMode::dollar) return {kOneDollar, RoundingMode::dollar};
    return {kOneCent, RoundingMode::cent};
  }
};

struct Solution {
  Money deduction;
  Money credit;
  SolutionMethod method = SolutionMethod::bisection;
  Certificate certificate;
  std::vector<BisectionBracket> trace;
  int evaluations = 0;
  Money upper_bound;  // b0
  /// Largest whole-dollar deduction not above `deduction`, and its credit.
  Money whole_dollar_deduction;
  Money whole_dollar_credit;
};

/// A sampled check found g decreasing somewhere; bisection would not be
/// trustworthy.
class NonMonotoneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spot-checks that g is nondecreasing at evenly spaced points of [lo, hi].
inline void check_monotone_samples(const PtcContext& ctx, Money lo, Money hi, int samples = 17) {
  Money previous_d = lo;
  Money previous = constraint_value(ctx, lo);
  for (int i = 1; i < samples; ++i) {
    Money d = lo + Money::from_cents((hi - lo).cents() * i / (samples - 1));
    Money value = constraint_value(ctx, d);
    if (value < previous)
      throw NonMonotoneError("d + PTC(d) decreases between " + previous_d.str() + " and " + d.str());
    previous = value;
    previous_d = d;
  }
}

/// Re-evaluates the certificate of `solution` against the model.
inline bool certificate_holds(const PtcContext& ctx, const Solution& solution) {
  const Money q = ctx.scenario.purchased_premium;
  if (solution.method == SolutionMethod::ineligible_full_deduction) return true;
  if (constraint_value(ctx, solution.deduction) > q) return false;
  if (solution.method == SolutionMethod::boundary_b0) return solution.deduction == solution.upper_bound;
  if (!solution.certificate.probe) return false;
  return constraint_value(ctx, *solution.certificate.probe) > q;
}

namespace detail {

inline void finish_solution(const PtcContext& ctx, Solution& s) {
  s.credit = ptc_of_deduction(ctx, s.deduction);
  s.certificate.constraint_at_d = constraint_value(ctx, s.deduction);
  s.whole_dollar_deduction = max(kZero, floor_dollars(s.deduction));
  s.whole_dollar_credit = ptc_of_deduction(ctx, s.whole_dollar_deduction);
}

inline Solution ineligible_solution(const PtcContext& ctx) {
  Solution s;
  s.method = SolutionMethod::ineligible_full_deduction;
  s.deduction = ctx.scenario.billed_premium();
  s.upper_bound = s.deduction;
  finish_solution(ctx, s);
  return s;
}

inline Solution solve_on_range(const PtcContext& ctx, Money upper, const SolverOptions& opts) {
  const Money q = ctx.scenario.purchased_premium;
  auto g = [&](Money d) { return constraint_value(ctx, d); };

  // g(0) = PTC(0) <= Q always holds because the credit is capped at Q;
  // the guard stays for models where that cap is absent.
  if (g(kZero) > q) return ineligible_solution(ctx);
  check_monotone_samples(ctx, kZero, upper);

  ThresholdResult search = threshold_search(ThresholdProblem{g, kZero, upper, q, opts.tolerance, opts.midpoint_rounding});

  Solution s;
  s.upper_bound = upper;
  s.deduction = search.value;
  s.trace = std::move(search.trace);
  s.evaluations = search.evaluations;
  if (search.upper_feasible) {
    s.method = SolutionMethod::boundary_b0;
  } else {
    s.method = SolutionMethod::bisection;
    Money probe = min(s.deduction + kOneDollar, upper);
    s.certificate.probe = probe;
    s.certificate.constraint_at_probe = g(probe);
  }
  finish_solution(ctx, s);
  return s;
}

}  // namespace detail

/// No advance credit: search [0, min(Q, I - d0 - F)].
inline Solution solve_no_aptc(const PtcContext& ctx, const SolverOptions& opts) {
  if (ctx.scenario.advance_credit != kZero) throw std::invalid_argument("solve_no_aptc: APTC must be zero");
  auto upper = deduction_upper_bound(ctx);
  if (!upper) throw std::invalid_argument("solve_no_aptc: household income below the poverty line");
  return detail::solve_on_range(ctx, *upper, opts);
}

/// Advance credit present: search [0, Q - APTC] (capped at the
/// eligibility limit when the below-poverty exception is off).
inline Solution solve_with_aptc(const PtcContext& ctx, const SolverOptions& opts) {
  if (ctx.scenario.advance_credit <= kZero) throw std::invalid_argument("solve_with_aptc: APTC must be positive");
  auto upper = deduction_upper_bound(ctx);
  if (!upper) throw std::invalid_argument("solve_with_aptc: household income below the poverty line");
  return detail::solve_on_range(ctx, *upper, opts);
}

/// The optimal deduction for any valid scenario.
inline Solution optimal_deduction(const PtcContext& ctx, const SolverOptions& opts) {
  if (!deduction_upper_bound(ctx)) return detail::ineligible_solution(ctx);
  if (ctx.scenario.advance_credit == kZero) return solve_no_aptc(ctx, opts);
  return solve_with_aptc(ctx, opts);
}

inline Solution optimal_deduction(const PtcContext& ctx) {
  return optimal_deduction(ctx, SolverOptions::for_rounding(ctx.rounding));
}

}  // namespace ptcfix
