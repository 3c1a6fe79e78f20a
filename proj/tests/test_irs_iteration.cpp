#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using fixtures::brooklyn;
using fixtures::context;
using ptcfix::IterationPoint;
using ptcfix::IterationStatus;
using ptcfix::Money;
using ptcfix::RoundingMode;

namespace {

IterationPoint pt(std::int64_t credit, std::int64_t deduction, int index) {
  return IterationPoint{Money::dollars(credit), Money::dollars(deduction), index};
}

void expect_even_subsequence_monotone(const std::vector<IterationPoint>& trace) {
  // D2 <= D4 <= ...; trace[0] is n = 1.
  for (std::size_t i = 3; i < trace.size(); i += 2)
    EXPECT_LE(trace[i - 2].deduction, trace[i].deduction) << "n = " << trace[i].index;
}

}  // namespace

TEST(IrsIteration, BrooklynTwoCycleDollarMode) {
  auto out = ptcfix::run_iteration(context(brooklyn(), RoundingMode::dollar));
  ASSERT_EQ(out.trace.size(), 3u);
  EXPECT_EQ(out.trace[0], pt(0, 10390, 1));
  EXPECT_EQ(out.trace[1], pt(4581, 5809, 2));
  EXPECT_EQ(out.trace[2], pt(0, 10390, 3));
  EXPECT_EQ(out.status, IterationStatus::diverged_do_not_use);
  ASSERT_TRUE(out.cycle);
  EXPECT_EQ(out.cycle->period(), 2u);
  EXPECT_EQ(*out.liminf_deduction, Money::dollars(5809));
  EXPECT_EQ(ptcfix::liminf_deduction(out), Money::dollars(5809));
  EXPECT_FALSE(out.settled);
  EXPECT_FALSE(out.start_clamped);
}

TEST(IrsIteration, BrooklynCentModeAlsoCycles) {
  auto out = ptcfix::run_iteration(context(brooklyn()));
  EXPECT_EQ(out.status, IterationStatus::diverged_do_not_use);
  ASSERT_EQ(out.trace.size(), 3u);
  EXPECT_EQ(out.trace[1].credit, Money::parse("4581.34"));
  EXPECT_EQ(out.trace[1].deduction, Money::parse("5808.66"));
}

TEST(IrsIteration, ZeroCreditConvergesImmediately) {
  auto s = brooklyn();
  s.benchmark_premium = Money::dollars(100);
  auto out = ptcfix::run_iteration(context(s));
  EXPECT_EQ(out.status, IterationStatus::converged_irs_sense);
  ASSERT_EQ(out.trace.size(), 2u);
  EXPECT_EQ(*out.settled, pt(0, 10390, 1));
}

TEST(IrsIteration, ModerateIncomeConverges) {
  auto s = brooklyn();
  s.income = Money::dollars(50000);
  auto ctx = context(s);
  auto out = ptcfix::run_iteration(ctx);
  ASSERT_EQ(out.status, IterationStatus::converged_irs_sense);
  Money d = out.settled->deduction;
  Money g = ptcfix::constraint_value(ctx, d);
  EXPECT_LE((g - s.purchased_premium).cents(), 200);
  EXPECT_GE((g - s.purchased_premium).cents(), -200);
  // Settled is P[n], the earlier of the two close iterates.
  EXPECT_EQ(*out.settled, out.trace[out.trace.size() - 2]);
  expect_even_subsequence_monotone(out.trace);
}

TEST(IrsIteration, StartClampedBelowEligibility) {
  auto s = brooklyn();
  s.income = Money::dollars(20000);
  auto out = ptcfix::run_iteration(context(s));
  EXPECT_TRUE(out.start_clamped);
  EXPECT_EQ(out.trace[0].deduction, Money::dollars(3760));
  EXPECT_EQ(out.deduction_cap, Money::dollars(3760));
  for (const auto& p : out.trace) {
    EXPECT_GE(p.deduction, Money());
    EXPECT_LE(p.deduction, out.deduction_cap);
  }
}

TEST(IrsIteration, BudgetExhausted) {
  auto out = ptcfix::run_iteration(context(brooklyn()), 2);
  EXPECT_EQ(out.status, IterationStatus::budget_exhausted);
  EXPECT_EQ(out.trace.size(), 2u);
  EXPECT_THROW(ptcfix::liminf_deduction(out), std::logic_error);
  EXPECT_THROW(ptcfix::run_iteration(context(brooklyn()), 1), std::invalid_argument);
}

TEST(IrsIteration, SimplifiedMethod) {
  auto r = ptcfix::simplified_method(context(brooklyn()));
  EXPECT_EQ(r.deduction, Money::parse("5808.66"));
  EXPECT_EQ(r.credit, Money());
  auto rd = ptcfix::simplified_method(context(brooklyn(), RoundingMode::dollar));
  EXPECT_EQ(rd.deduction, Money::dollars(5809));
  EXPECT_EQ(rd.credit, Money());
}

TEST(IrsIteration, StepMatchesTrace) {
  auto ctx = context(brooklyn(), RoundingMode::dollar);
  auto next = ptcfix::step_credit_map(ctx, pt(0, 10390, 1));
  EXPECT_EQ(next, pt(4581, 5809, 2));
}

TEST(IrsIteration, PropertiesOnRandomScenarios) {
  std::mt19937_64 rng(31);
  int diverged = 0, converged = 0;
  for (int i = 0; i < 300; ++i) {
    auto s = fixtures::random_scenario(rng);
    for (auto mode : {RoundingMode::cent, RoundingMode::dollar}) {
      auto ctx = context(s, mode);
      auto a = ptcfix::run_iteration(ctx);
      auto b = ptcfix::run_iteration(ctx);
      ASSERT_EQ(a.trace, b.trace);
      ASSERT_NE(a.status, IterationStatus::budget_exhausted) << ptcfix::to_document(s);
      expect_even_subsequence_monotone(a.trace);
      for (std::size_t k = 0; k < a.trace.size(); ++k) {
        EXPECT_EQ(a.trace[k].index, static_cast<int>(k) + 1);
        EXPECT_GE(a.trace[k].deduction, Money());
        EXPECT_LE(a.trace[k].deduction, a.deduction_cap);
      }
      if (a.status == IterationStatus::diverged_do_not_use) {
        ++diverged;
        EXPECT_GE(a.cycle->period(), 2u);
      } else {
        ++converged;
      }
    }
  }
  EXPECT_GT(diverged, 0);
  EXPECT_GT(converged, 0);
}
