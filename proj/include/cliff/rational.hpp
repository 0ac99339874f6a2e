#pragma once

// Exact rational numbers backed by GMP.  Every value is kept in lowest terms
// with a positive denominator, so equality is structural.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cliff {

class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : value_(value) {}   // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator);
  explicit Rational(const mpq_class& value);

  /// Parses "num/den", an integer, or a decimal literal such as "0.49" or
  /// "-1.5e-3".  Decimals are converted exactly (0.49 == 49/100).
  /// Throws std::invalid_argument on malformed text or a zero denominator.
  static Rational parse(std::string_view text);

  /// Exact value of a finite double (every double is a dyadic rational).
  static Rational from_double(double value);

  [[nodiscard]] std::string numerator_str() const;
  [[nodiscard]] std::string denominator_str() const;
  /// Always "num/den", including integers ("4/1").
  [[nodiscard]] std::string str() const;
  [[nodiscard]] double to_double() const { return value_.get_d(); }
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_integer() const;
  [[nodiscard]] const mpq_class& raw() const { return value_; }

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  friend Rational operator-(const Rational& value);

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return cmp(lhs.value_, rhs.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    const int c = cmp(lhs.value_, rhs.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& value);

 private:
  mpq_class value_{0};
};

}  // namespace cliff
