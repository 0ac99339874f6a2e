#include "cliff/rational.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cliff {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c)) == 0) return false;
  }
  return true;
}

[[noreturn]] void malformed(std::string_view text) {
  throw std::invalid_argument("malformed rational literal: '" + std::string(text) + "'");
}

// Accepts [sign] digits [. digits] [e|E [sign] digits]
mpq_class parse_decimal(std::string_view text) {
  std::string_view rest = text;
  bool negative = false;
  if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }

  long exponent = 0;
  if (auto epos = rest.find_first_of("eE"); epos != std::string_view::npos) {
    std::string_view exp_part = rest.substr(epos + 1);
    rest = rest.substr(0, epos);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 4) malformed(text);
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }

  std::string_view int_part = rest;
  std::string_view frac_part;
  if (auto dot = rest.find('.'); dot != std::string_view::npos) {
    int_part = rest.substr(0, dot);
    frac_part = rest.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) malformed(text);
  if (!int_part.empty() && !all_digits(int_part)) malformed(text);
  if (!frac_part.empty() && !all_digits(frac_part)) malformed(text);

  std::string digits = std::string(int_part) + std::string(frac_part);
  exponent -= static_cast<long>(frac_part.size());

  mpz_class mantissa(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  mpq_class value = exponent >= 0 ? mpq_class(mantissa * scale) : mpq_class(mantissa, scale);
  value.canonicalize();
  return negative ? mpq_class(-value) : value;
}

}  // namespace

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())) != 0)
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())) != 0)
    text.remove_suffix(1);
  if (text.empty()) malformed(text);

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
      num_digits.remove_prefix(1);
    if (!all_digits(num_digits) || !all_digits(den)) malformed(text);
    mpz_class n(std::string(num_digits), 10);
    if (!num.empty() && num.front() == '-') n = -n;
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("rational with zero denominator: '" + std::string(text) + "'");
    mpq_class q(n, d);
    q.canonicalize();
    return Rational(q);
  }
  return Rational(parse_decimal(text));
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("cannot convert non-finite double to rational");
  // mpq_set_d is exact for finite doubles.
  return Rational(mpq_class(value));
}

std::string Rational::numerator_str() const { return value_.get_num().get_str(); }
std::string Rational::denominator_str() const { return value_.get_den().get_str(); }
std::string Rational::str() const { return numerator_str() + "/" + denominator_str(); }
bool Rational::is_integer() const { return value_.get_den() == 1; }

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.sign() == 0) throw std::domain_error("rational division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational operator-(const Rational& value) { return Rational(mpq_class(-value.value_)); }

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.str(); }

}  // namespace cliff
