#pragma once

// Exact monetary and rational arithmetic.
//
// Every currency amount is an integer count of cents.  Intermediate
// products (applicable figure times household income, midpoints, ratios
// of income to the poverty line) are exact rationals over 128-bit
// integers and only become Money through an explicit rounding step.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptcfix {

using wide = __int128;

namespace detail {

constexpr wide abs_wide(wide v) { return v < 0 ? -v : v; }

constexpr wide gcd_wide(wide a, wide b) {
  a = abs_wide(a);
  b = abs_wide(b);
  while (b != 0) {
    wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Nearest integer to num/den, ties away from zero.  den > 0.
constexpr wide round_half_away(wide num, wide den) {
  wide q = num / den;
  wide r = num % den;
  if (2 * abs_wide(r) >= den) q += (num < 0) ? -1 : 1;
  return q;
}

// Largest integer <= num/den.  den > 0.
constexpr wide floor_div(wide num, wide den) {
  wide q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

inline std::string wide_to_string(wide v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string out;
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    out.insert(out.begin(), static_cast<char>('0' + (digit < 0 ? -digit : digit)));
    v /= 10;
  }
  if (neg) out.insert(out.begin(), '-');
  return out;
}

}  // namespace detail

/// Exact rational number with a positive denominator.
///
/// Construction does not reduce, so hot paths can build a ratio from two
/// integers without paying for a gcd.  Arithmetic operators return reduced
/// results; comparisons cross-multiply and work on unreduced values.
class Ratio {
 public:
  constexpr Ratio() = default;
  constexpr Ratio(wide num, wide den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("Ratio: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  constexpr wide num() const { return num_; }
  constexpr wide den() const { return den_; }

  constexpr Ratio reduced() const {
    wide g = detail::gcd_wide(num_, den_);
    if (g <= 1) return *this;
    return Ratio(num_ / g, den_ / g);
  }

  /// Nearest integer, ties away from zero.
  constexpr wide round() const { return detail::round_half_away(num_, den_); }
  constexpr wide floor() const { return detail::floor_div(num_, den_); }

  friend constexpr Ratio operator+(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_).reduced();
  }
  friend constexpr Ratio operator-(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_).reduced();
  }
  friend constexpr Ratio operator*(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.num_, a.den_ * b.den_).reduced();
  }
  friend constexpr Ratio operator/(const Ratio& a, const Ratio& b) {
    if (b.num_ == 0) throw std::domain_error("Ratio: division by zero");
    return Ratio(a.num_ * b.den_, a.den_ * b.num_).reduced();
  }
  constexpr Ratio operator-() const { return Ratio(-num_, den_); }

  friend constexpr bool operator==(const Ratio& a, const Ratio& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }
  friend constexpr std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    wide lhs = a.num_ * b.den_;
    wide rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Decimal rendering rounded half away from zero at `places` digits.
  std::string to_decimal(int places) const {
    wide scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    wide scaled = detail::round_half_away(num_ * scale, den_);
    bool neg = scaled < 0;
    std::string digits = detail::wide_to_string(detail::abs_wide(scaled));
    if (places > 0) {
      if (digits.size() <= static_cast<std::size_t>(places))
        digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
      digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    }
    return neg ? "-" + digits : digits;
  }

 private:
  wide num_ = 0;
  wide den_ = 1;
};

/// Parses a plain decimal ("0.0201", "12", "-3.5") into an exact Ratio.
/// Throws std::invalid_argument on anything else.
inline Ratio parse_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  bool neg = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    neg = text[0] == '-';
    ++i;
  }
  wide num = 0;
  wide den = 1;
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '.') {
      if (seen_point) throw std::invalid_argument("malformed number: " + std::string(text));
      seen_point = true;
      continue;
    }
    if (ch < '0' || ch > '9') throw std::invalid_argument("malformed number: " + std::string(text));
    seen_digit = true;
    num = num * 10 + (ch - '0');
    if (seen_point) den *= 10;
    if (num > (wide{1} << 100) || den > (wide{1} << 100))
      throw std::invalid_argument("number too long: " + std::string(text));
  }
  if (!seen_digit) throw std::invalid_argument("malformed number: " + std::string(text));
  return Ratio(neg ? -num : num, den);
}

enum class RoundingMode { cent, dollar, none };

inline std::string_view to_string(RoundingMode mode) {
  switch (mode) {
    case RoundingMode::cent: return "cent";
    case RoundingMode::dollar: return "dollar";
    case RoundingMode::none: return "none";
  }
  return "cent";
}

inline RoundingMode parse_rounding_mode(std::string_view text) {
  if (text == "cent") return RoundingMode::cent;
  if (text == "dollar") return RoundingMode::dollar;
  if (text == "none") return RoundingMode::none;
  throw std::invalid_argument("unknown rounding mode: " + std::string(text));
}

/// Signed amount of US currency held as an exact count of cents.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }
  static constexpr Money dollars(std::int64_t whole) { return Money(whole * 100); }

  /// Accepts "10390", "10,390.50", "$865.81", "-12.3".  At most two
  /// fractional digits; anything finer is rejected rather than rounded.
  static Money parse(std::string_view text) {
    std::string cleaned;
    for (char ch : text) {
      if (ch == ',' || ch == '$' || ch == ' ') continue;
      cleaned.push_back(ch);
    }
    Ratio value = parse_decimal(cleaned);
    Ratio cents = value * Ratio(100);
    if (cents.den() != 1) throw std::invalid_argument("amount finer than one cent: " + std::string(text));
    if (detail::abs_wide(cents.num()) > kLimit) throw std::invalid_argument("amount out of range: " + std::string(text));
    return Money(static_cast<std::int64_t>(cents.num()));
  }

  constexpr std::int64_t cents() const { return cents_; }
  constexpr Ratio as_cents() const { return Ratio(cents_); }
  constexpr Ratio as_dollars() const { return Ratio(cents_, 100); }
  constexpr bool is_whole_dollars() const { return cents_ % 100 == 0; }

  constexpr Money operator-() const { return Money(-cents_); }
  friend constexpr Money operator+(Money a, Money b) { return Money(a.cents_ + b.cents_); }
  friend constexpr Money operator-(Money a, Money b) { return Money(a.cents_ - b.cents_); }
  friend constexpr Money operator*(Money a, std::int64_t k) { return Money(a.cents_ * k); }
  friend constexpr Money operator*(std::int64_t k, Money a) { return Money(a.cents_ * k); }
  constexpr Money& operator+=(Money other) {
    cents_ += other.cents_;
    return *this;
  }
  constexpr Money& operator-=(Money other) {
    cents_ -= other.cents_;
    return *this;
  }

  friend constexpr auto operator<=>(Money, Money) = default;
  friend constexpr bool operator==(Money, Money) = default;

  /// "-1234.50" style, no grouping.
  std::string str() const { return as_dollars().to_decimal(2); }

  /// Largest accepted magnitude: one billion dollars.  Keeps every
  /// intermediate product comfortably inside 128 bits.
  static constexpr wide kLimit = wide{100'000'000'000};

 private:
  explicit constexpr Money(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_ = 0;
};

inline constexpr Money kZero = Money::from_cents(0);
inline constexpr Money kOneCent = Money::from_cents(1);
inline constexpr Money kOneDollar = Money::dollars(1);

constexpr Money min(Money a, Money b) { return a < b ? a : b; }
constexpr Money max(Money a, Money b) { return a < b ? b : a; }

/// Rounds an exact amount given in cents.  `none` still lands on the cent
/// lattice; there is nowhere finer for a Money to live.
constexpr Money round_cents(const Ratio& cents, RoundingMode mode) {
  switch (mode) {
    case RoundingMode::dollar:
      return Money::from_cents(static_cast<std::int64_t>(detail::round_half_away(cents.num(), cents.den() * 100) * 100));
    case RoundingMode::cent:
    case RoundingMode::none:
      break;
  }
  return Money::from_cents(static_cast<std::int64_t>(cents.round()));
}

/// Rounds an exact dollar amount to Money, half away from zero.
constexpr Money round_money(const Ratio& dollars, RoundingMode mode) {
  return round_cents(Ratio(dollars.num() * 100, dollars.den()), mode);
}

constexpr Money round_money(Money amount, RoundingMode mode) { return round_cents(amount.as_cents(), mode); }

/// Whole dollars not exceeding `amount`.
constexpr Money floor_dollars(Money amount) {
  return Money::from_cents(static_cast<std::int64_t>(detail::floor_div(amount.cents(), 100) * 100));
}

/// "$10,390" or "$10,390.00" style with thousands grouping.
inline std::string format_dollars(Money amount, bool with_cents) {
  std::string body = with_cents ? amount.str() : Money(round_money(amount, RoundingMode::dollar)).as_dollars().to_decimal(0);
  bool neg = !body.empty() && body[0] == '-';
  if (neg) body.erase(0, 1);
  std::size_t point = body.find('.');
  std::size_t int_end = point == std::string::npos ? body.size() : point;
  std::string grouped;
  for (std::size_t i = 0; i < int_end; ++i) {
    if (i > 0 && (int_end - i) % 3 == 0) grouped.push_back(',');
    grouped.push_back(body[i]);
  }
  grouped += body.substr(int_end);
  return (neg ? "-$" : "$") + grouped;
}

}  // namespace ptcfix
