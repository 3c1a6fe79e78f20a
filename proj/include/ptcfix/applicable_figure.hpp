#pragma once

// The applicable figure f(m): the share of household income a household
// is expected to contribute toward its benchmark premium, as a function of
// m = household income / poverty line.
//
// Shape shared by every supported tax year:
//
//   j                       0    <= m < 1.33   (flat; [0,1) reuses f(1))
//   k  -> l  linearly       1.33 <= m < 1.5
//   l  -> a  linearly       1.5  <= m < 2
//   a  -> b  linearly       2    <= m < 2.5
//   b  -> c  linearly       2.5  <= m < 3
//   c                       3    <= m <= 4
//
// The function jumps from j to k at m = 1.33 and is right continuous
// everywhere else.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ptcfix/money.hpp"

namespace ptcfix {

/// Knot values in ten-thousandths (0.0201 is stored as 201).
struct FigureTable {
  std::array<std::int32_t, 6> knots{};  // j, k, l, a, b, c

  static constexpr std::array<const char*, 6> kNames = {"j", "k", "l", "a", "b", "c"};

  constexpr std::int32_t j() const { return knots[0]; }
  constexpr std::int32_t k() const { return knots[1]; }
  constexpr std::int32_t l() const { return knots[2]; }
  constexpr std::int32_t a() const { return knots[3]; }
  constexpr std::int32_t b() const { return knots[4]; }
  constexpr std::int32_t c() const { return knots[5]; }

  Ratio knot(std::size_t i) const { return Ratio(knots.at(i), 10000); }

  /// Throws std::invalid_argument naming the first offending knot.
  void validate() const {
    if (knots[0] <= 0) throw std::invalid_argument("figure.j must be positive");
    for (std::size_t i = 1; i < knots.size(); ++i) {
      if (knots[i] < knots[i - 1])
        throw std::invalid_argument(std::string("figure.") + kNames[i] + " is smaller than figure." + kNames[i - 1] +
                                    " (figure values must be nondecreasing)");
    }
    if (knots[5] >= 1000) throw std::invalid_argument("figure.c must be below 0.1");
  }

  friend bool operator==(const FigureTable&, const FigureTable&) = default;
};

/// Breakpoints of m in hundredths: 1, 1.33, 1.5, 2, 2.5, 3, 4.
inline constexpr std::array<std::int32_t, 7> kFigureBreakpoints = {100, 133, 150, 200, 250, 300, 400};

namespace detail {

// f(m) as an unreduced ratio.  m must already be range-checked to [0,4]
// (negative m is folded onto the flat first segment).
inline Ratio figure_unreduced(const Ratio& m, const FigureTable& table) {
  // m < bp/100  <=>  100*num < bp*den
  auto below = [&](std::int32_t hundredths) { return m.num() * 100 < wide{hundredths} * m.den(); };
  if (below(133)) return Ratio(table.j(), 10000);
  if (!below(300)) return Ratio(table.c(), 10000);

  std::int32_t lo, hi, v_lo, v_hi;
  if (below(150)) {
    lo = 133, hi = 150, v_lo = table.k(), v_hi = table.l();
  } else if (below(200)) {
    lo = 150, hi = 200, v_lo = table.l(), v_hi = table.a();
  } else if (below(250)) {
    lo = 200, hi = 250, v_lo = table.a(), v_hi = table.b();
  } else {
    lo = 250, hi = 300, v_lo = table.b(), v_hi = table.c();
  }
  // v_lo + (v_hi - v_lo) * (m - lo/100) / ((hi - lo)/100), in ten-thousandths.
  const wide span = hi - lo;
  const wide num = wide{v_lo} * span * m.den() + wide{v_hi - v_lo} * (100 * m.num() - wide{lo} * m.den());
  return Ratio(num, span * m.den() * 10000);
}

}  // namespace detail

/// Exact m = income / poverty_line.
inline Ratio poverty_ratio(Money income, Money poverty_line) {
  if (poverty_line <= kZero) throw std::domain_error("poverty line must be positive");
  return Ratio(income.cents(), poverty_line.cents());
}

/// f(m) for m in [0, 4].  With `quantize`, the value is rounded half away
/// from zero to the nearest ten-thousandth, which is how the published
/// percentage tables are produced.
inline Ratio applicable_figure(const Ratio& m, const FigureTable& table, bool quantize = false) {
  if (m < Ratio(0) || m > Ratio(4))
    throw std::domain_error("applicable figure requested outside 0 <= m <= 4 (m = " + m.to_decimal(6) + ")");
  Ratio value = detail::figure_unreduced(m, table);
  if (quantize) return Ratio(detail::round_half_away(value.num() * 10000, value.den()), 10000).reduced();
  return value.reduced();
}

}  // namespace ptcfix
