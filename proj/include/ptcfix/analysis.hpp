#pragma once

// Exhaustive lattice oracle and the income scanner that maps where the
// IRS iteration breaks down and where d + PTC(d) = Q has no solution.

#include <algorithm>
#include <functional>
#include <future>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ptcfix/bisection.hpp"
#include "ptcfix/irs_iteration.hpp"
#include "ptcfix/money.hpp"
#include "ptcfix/ptc_model.hpp"

namespace ptcfix {

/// Largest d on the lattice {0, step, 2*step, ...} (plus the upper end
/// itself) with d + PTC(d) <= Q.  The upper end is min(Q - APTC, I - d0 - F),
/// or Q - APTC under the below-poverty exception.  Every lattice point is
/// evaluated; monotonicity is not assumed.
inline Money brute_force_max_feasible(const PtcContext& ctx, Money step) {
  if (step < kOneCent) throw std::invalid_argument("brute_force_max_feasible: step below one cent");
  auto bound = deduction_upper_bound(ctx);
  if (!bound) return ctx.scenario.billed_premium();
  const Money upper = *bound;
  const Money q = ctx.scenario.purchased_premium;

  std::optional<Money> best;
  for (Money d = kZero; d <= upper; d += step) {
    if (constraint_value(ctx, d) <= q) best = d;
  }
  if (constraint_value(ctx, upper) <= q) best = upper;
  return best.value_or(kZero);
}

enum class IrsScanStatus { converged, diverged, exhausted, error };
enum class ScanClass { none, irs_diverges, equation_gap };

inline std::string_view to_string(IrsScanStatus status) {
  switch (status) {
    case IrsScanStatus::converged: return "converged";
    case IrsScanStatus::diverged: return "diverged";
    case IrsScanStatus::exhausted: return "exhausted";
    case IrsScanStatus::error: return "error";
  }
  return "error";
}

inline std::string_view to_string(ScanClass kind) {
  switch (kind) {
    case ScanClass::none: return "none";
    case ScanClass::irs_diverges: return "irs_diverges";
    case ScanClass::equation_gap: return "equation_gap";
  }
  return "none";
}

struct ScanRecord {
  Money income;
  IrsScanStatus irs_status = IrsScanStatus::error;
  Money simplified_ptc;
  Money bisection_ptc;
  Money bisection_d;
  Money oracle_d;
  /// Q - g(d) < $1 at the returned deduction.
  bool equation_solvable = true;
  Money benefit_gap;  // bisection_ptc - simplified_ptc
  SolutionMethod method = SolutionMethod::bisection;
  /// Q - g(d), kept for diagnostics.
  Money constraint_slack;
  ScanClass classification = ScanClass::none;
  std::string error;
};

struct ScanInterval {
  ScanClass kind = ScanClass::none;
  Money from;
  Money to;
  std::size_t points = 0;
  /// Endpoints located to $1 when refinement is on.
  std::optional<Money> refined_from;
  std::optional<Money> refined_to;
};

struct ScanOptions {
  RoundingMode rounding = RoundingMode::cent;
  bool refine = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct ScanSummary {
  std::size_t records = 0;
  std::vector<ScanInterval> intervals;
};

/// equation_gap wins over irs_diverges: where no solution exists the
/// iteration cannot converge, so the gap is the more specific finding.
inline ScanClass classify(const ScanRecord& r) {
  if (r.irs_status == IrsScanStatus::error) return ScanClass::none;
  if (r.method == SolutionMethod::bisection && !r.equation_solvable) return ScanClass::equation_gap;
  if (r.irs_status == IrsScanStatus::diverged) return ScanClass::irs_diverges;
  return ScanClass::none;
}

/// Runs every method on `templ` with its income replaced by `income`.
inline ScanRecord scan_point(const Scenario& templ, Money income, const TaxYearParams& params, RoundingMode rounding) {
  ScanRecord r;
  r.income = income;
  try {
    Scenario s = templ;
    s.income = income;
    s.validate();
    PtcContext ctx{s, params, rounding, false};

    IterationOutcome iter = run_iteration(ctx);
    switch (iter.status) {
      case IterationStatus::converged_irs_sense: r.irs_status = IrsScanStatus::converged; break;
      case IterationStatus::diverged_do_not_use: r.irs_status = IrsScanStatus::diverged; break;
      case IterationStatus::budget_exhausted: r.irs_status = IrsScanStatus::exhausted; break;
    }
    r.simplified_ptc = simplified_method(ctx).credit;

    Solution sol = optimal_deduction(ctx);
    r.method = sol.method;
    r.bisection_d = sol.deduction;
    r.bisection_ptc = sol.credit;
    r.constraint_slack = s.purchased_premium - sol.certificate.constraint_at_d;
    r.equation_solvable = r.constraint_slack < kOneDollar;
    r.benefit_gap = r.bisection_ptc - r.simplified_ptc;
    r.oracle_d = brute_force_max_feasible(ctx, kOneDollar);
  } catch (const std::exception& e) {
    r.irs_status = IrsScanStatus::error;
    r.error = e.what();
  }
  r.classification = classify(r);
  return r;
}

namespace detail {

// pred(lo) holds and pred(hi) does not; narrows to adjacent dollars.
template <class Pred>
std::pair<Money, Money> refine_boundary(Money lo, Money hi, Pred pred) {
  while (hi - lo > kOneDollar) {
    Money mid = floor_dollars(Money::from_cents(lo.cents() + (hi - lo).cents() / 2));
    if (mid <= lo) mid = lo + kOneDollar;
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

}  // namespace detail

using ScanSink = std::function<void(const ScanRecord&)>;

/// Sweeps income over lo, lo+step, ..., <= hi.  Records reach `sink` in
/// ascending income order; points are evaluated concurrently in bounded
/// batches.  Contiguous runs of the same non-none classification are
/// merged into intervals.
inline ScanSummary scan_divergence(const Scenario& templ, Money lo, Money hi, Money step, const TaxYearParams& params,
                                   const ScanOptions& opts, const ScanSink& sink) {
  if (lo > hi) throw std::invalid_argument("scan: income_lo exceeds income_hi");
  if (step < kOneDollar) throw std::invalid_argument("scan: step must be at least $1");

  const std::size_t count = static_cast<std::size_t>((hi - lo).cents() / step.cents()) + 1;
  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
  const std::size_t batch = std::max<std::size_t>(64, std::size_t{threads} * 16);

  auto classify_income = [&](Money income) { return scan_point(templ, income, params, opts.rounding).classification; };

  ScanSummary summary;
  std::optional<ScanInterval> open;
  std::optional<ScanRecord> previous;

  auto close_open = [&](std::optional<Money> next_income) {
    if (!open) return;
    if (opts.refine && next_income) {
      ScanClass kind = open->kind;
      open->refined_to =
          detail::refine_boundary(open->to, *next_income, [&](Money x) { return classify_income(x) == kind; }).first;
    }
    summary.intervals.push_back(*open);
    open.reset();
  };

  auto consume = [&](const ScanRecord& r) {
    sink(r);
    ++summary.records;
    if (open && open->kind == r.classification) {
      open->to = r.income;
      ++open->points;
    } else {
      close_open(r.income);
      if (r.classification != ScanClass::none) {
        open = ScanInterval{r.classification, r.income, r.income, 1, std::nullopt, std::nullopt};
        if (opts.refine && previous) {
          ScanClass kind = r.classification;
          open->refined_from =
              detail::refine_boundary(previous->income, r.income, [&](Money x) { return classify_income(x) != kind; })
                  .second;
        }
      }
    }
    previous = r;
  };

  for (std::size_t start = 0; start < count; start += batch) {
    const std::size_t n = std::min(batch, count - start);
    std::vector<ScanRecord> results(n);
    const std::size_t per = (n + threads - 1) / threads;
    std::vector<std::future<void>> workers;
    for (std::size_t first = 0; first < n; first += per) {
      const std::size_t last = std::min(n, first + per);
      workers.push_back(std::async(std::launch::async, [&, first, last] {
        for (std::size_t i = first; i < last; ++i)
          results[i] = scan_point(templ, lo + step * static_cast<std::int64_t>(start + i), params, opts.rounding);
      }));
    }
    for (auto& w : workers) w.get();
    for (const auto& r : results) consume(r);
  }
  close_open(std::nullopt);
  return summary;
}

/// Collecting variant of scan_divergence.
inline std::vector<ScanRecord> scan_collect(const Scenario& templ, Money lo, Money hi, Money step,
                                            const TaxYearParams& params, const ScanOptions& opts,
                                            ScanSummary* summary_out = nullptr) {
  std::vector<ScanRecord> records;
  ScanSummary summary =
      scan_divergence(templ, lo, hi, step, params, opts, [&](const ScanRecord& r) { records.push_back(r); });
  if (summary_out) *summary_out = std::move(summary);
  return records;
}

inline constexpr std::string_view kScanCsvHeader =
    "income,irs_status,simplified_ptc,bisection_ptc,bisection_d,oracle_d,equation_solvable,benefit_gap";

inline std::string csv_amount(Money amount, bool cents) {
  return cents ? amount.str() : round_money(amount, RoundingMode::dollar).as_dollars().to_decimal(0);
}

inline void write_scan_csv_row(std::ostream& out, const ScanRecord& r, bool cents) {
  out << csv_amount(r.income, cents) << ',' << to_string(r.irs_status) << ',' << csv_amount(r.simplified_ptc, cents)
      << ',' << csv_amount(r.bisection_ptc, cents) << ',' << csv_amount(r.bisection_d, cents) << ','
      << csv_amount(r.oracle_d, cents) << ',' << (r.equation_solvable ? "true" : "false") << ','
      << csv_amount(r.benefit_gap, cents) << '\n';
}

}  // namespace ptcfix
