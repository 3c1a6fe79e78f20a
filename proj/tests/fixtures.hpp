#pragma once

#include <cstdint>
#include <random>

#include "oracle.hpp"
#include "ptcfix/ptcfix.hpp"

namespace fixtures {

using ptcfix::Money;

inline ptcfix::Scenario brooklyn() {
  ptcfix::Scenario s;
  s.poverty_line = Money::dollars(16240);
  s.benchmark_premium = Money::dollars(10390);
  s.purchased_premium = Money::dollars(10390);
  s.income = Money::dollars(71150);
  s.tax_year = 2018;
  return s;
}

inline ptcfix::PtcContext context(const ptcfix::Scenario& s, ptcfix::RoundingMode mode = ptcfix::RoundingMode::cent) {
  return ptcfix::PtcContext{s, ptcfix::builtin_tax_year(s.tax_year), mode, false};
}

inline Money uniform_dollars(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return Money::dollars(std::uniform_int_distribution<std::int64_t>(lo, hi)(rng));
}

/// F in [12k, 50k], Q = P in [3k, 30k], I in [F, 6F] (redrawn until I >= Q),
/// APTC zero half the time and otherwise uniform on [0, Q].
inline ptcfix::Scenario random_scenario(std::mt19937_64& rng, bool with_aptc = true) {
  ptcfix::Scenario s;
  s.poverty_line = uniform_dollars(rng, 12000, 50000);
  s.purchased_premium = uniform_dollars(rng, 3000, 30000);
  s.benchmark_premium = s.purchased_premium;
  const std::int64_t f = s.poverty_line.cents() / 100;
  do {
    s.income = uniform_dollars(rng, f, 6 * f);
  } while (s.income < s.purchased_premium);
  if (with_aptc && std::bernoulli_distribution(0.5)(rng))
    s.advance_credit = Money::from_cents(
        std::uniform_int_distribution<std::int64_t>(0, s.purchased_premium.cents())(rng));
  s.tax_year = std::bernoulli_distribution(0.5)(rng) ? 2018 : 2019;
  return s;
}

inline oracle::cpp_rational dollars_of(Money m) { return oracle::q(m.cents(), 100); }

inline oracle::Household household(const ptcfix::Scenario& s) {
  oracle::Household h;
  h.F = dollars_of(s.poverty_line);
  h.P = dollars_of(s.benchmark_premium);
  h.Q = dollars_of(s.purchased_premium);
  h.I = dollars_of(s.income);
  h.APTC = dollars_of(s.advance_credit);
  h.d0 = dollars_of(s.other_deductions);
  h.exception = s.below_poverty_exception;
  h.table = s.tax_year == 2019 ? oracle::k2019 : oracle::k2018;
  return h;
}

}  // namespace fixtures
