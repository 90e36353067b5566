#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rlab {

/// Arbitrary-precision rational number in canonical form: the numerator
/// and the positive denominator are coprime.
///
/// A thin value wrapper around `mpq_class`; it exists so that expression
/// templates never leak into `auto` variables and so that the textual form
/// is fixed to "p/q" (or "p" when the denominator is 1).
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const mpz_class& n);
  explicit Rational(mpq_class q);

  /// Parses "p", "p/q" or "-p/q" (whitespace not allowed). Throws
  /// SchemaError on malformed input or a zero denominator.
  static Rational parse(std::string_view text);

  [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
  [[nodiscard]] const mpq_class& gmp() const { return value_; }

  [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] double to_double() const { return value_.get_d(); }
  [[nodiscard]] std::string str() const { return value_.get_str(); }

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  mpq_class value_;
};

Rational abs(const Rational& x);

/// x^e for integer e (negative e requires x != 0).
Rational pow(const Rational& x, std::int64_t e);

std::ostream& operator<<(std::ostream& os, const Rational& x);

}  // namespace rlab
