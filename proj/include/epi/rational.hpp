#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace epi {

/// Arbitrary-precision integer. Thin alias; all integer work in the library
/// (fraction-free elimination, content extraction, divisor arithmetic) runs on
/// this type directly.
using Integer = mpz_class;

/// Exact rational scalar.
///
/// Invariants: the stored value is always in lowest terms with positive
/// denominator (GMP canonical form), so equality is representational equality.
/// Division by zero throws std::domain_error; it is never undefined behaviour.
class Rational {
public:
  Rational() : v_(0) {}
  Rational(long n) : v_(static_cast<signed long>(n)) {}
  Rational(int n) : v_(static_cast<signed long>(n)) {}
  explicit Rational(const Integer& n) : v_(n) {}

  /// num/den, reduced. Throws std::domain_error when den == 0.
  Rational(const Integer& num, const Integer& den) {
    if (sgn(den) == 0) throw std::domain_error("Rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}

  /// Parses "p/q", a plain integer, or a finite decimal ("-3", "5/15",
  /// "0.25", "-.5"). Returns nullopt on any other input. No whitespace is
  /// accepted; exponents are not part of the format.
  static std::optional<Rational> parse(std::string_view s);

  /// Canonical text form: "p/q" when the denominator is not 1, else "p".
  std::string str() const { return v_.get_str(); }

  Integer num() const { return v_.get_num(); }
  Integer den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  Rational reciprocal() const {
    if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
    return Rational(v_.get_den(), v_.get_num());
  }

  /// Nearest double, rounded by GMP. Only for diagnostics and numeric
  /// cross-checks in tests; no decision in the library depends on it.
  double to_double() const { return v_.get_d(); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
    return c <=> 0;
  }

private:
  explicit Rational(mpq_class q) : v_(std::move(q)) {}
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

/// True iff q is the square of a rational; then *root is the nonnegative
/// square root. (Canonical form makes this a pair of integer square tests.)
bool is_perfect_square(const Rational& q, Rational* root);

/// 10^k as an Integer.
Integer pow10(unsigned k);

}  // namespace epi
