#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "epi/rational.hpp"

namespace epi {

/// Dense univariate polynomial over the rationals, coefficients low to high.
/// The zero polynomial has an empty coefficient vector; otherwise the leading
/// coefficient is nonzero.
class UPoly {
public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    trim();
  }
  static UPoly constant(const Rational& a) { return UPoly({a}); }

  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Rational& leading() const { return c_.back(); }
  const Rational& coeff(int i) const {
    static const Rational zero;
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : zero;
  }
  const std::vector<Rational>& coeffs() const { return c_; }

  Rational eval(const Rational& x) const;
  int sign_at(const Rational& x) const { return eval(x).sign(); }
  /// Sign of p(x) as x -> +inf (dir > 0) or x -> -inf (dir < 0).
  int sign_at_infinity(int dir) const;

  UPoly derivative() const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const Rational& s, const UPoly& a);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  /// Quotient and remainder over Q; divisor must be nonzero.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);

  /// Divides out a known root exactly (throws if a is not a root).
  UPoly deflate_root(const Rational& a) const;

  /// Scales by the positive rational making the coefficients coprime
  /// integers. Identity on the zero polynomial.
  UPoly primitive() const;
  UPoly monic() const;

private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Monic gcd over Q (Euclid with primitive rescaling between steps).
UPoly gcd(const UPoly& a, const UPoly& b);

/// p divided by gcd(p, p'): same real roots, all simple.
UPoly squarefree_part(const UPoly& p);

/// Sturm chain of p: p, p', then negated remainders down to a constant.
struct SturmChain {
  std::vector<UPoly> seq;

  static SturmChain build(const UPoly& p);
  /// Sign variations at x; zero entries are skipped.
  int variations_at(const Rational& x) const;
  int variations_at_infinity(int dir) const;
};

/// Number of distinct real roots of p in the half-open interval (a, b].
/// nullopt bounds mean -inf / +inf respectively. Exact for any p (multiple
/// roots are counted once); the zero polynomial is rejected.
int sturm_count(const UPoly& p, const std::optional<Rational>& a,
                const std::optional<Rational>& b);

/// An isolating interval for one distinct real root. Exact roots are stored
/// with lo == hi; otherwise the root lies strictly inside (lo, hi) and the
/// endpoints are not roots.
struct RootInterval {
  Rational lo, hi;
  bool exact() const { return lo == hi; }
  Rational mid() const { return (lo + hi) / Rational(2); }
  Rational width() const { return hi - lo; }
};

/// Disjoint isolating intervals for all distinct real roots, ascending.
std::vector<RootInterval> isolate_real_roots(const UPoly& p);

/// Shrinks a (non-exact) isolating interval of p by bisection until its width
/// is at most `width`. The interval keeps non-root endpoints.
RootInterval refine_root(const UPoly& p, RootInterval iv, const Rational& width);

/// The rational with the smallest denominator in the closed interval
/// [lo, hi] (ties broken towards the value of smaller |numerator|).
Rational simplest_rational_in(const Rational& lo, const Rational& hi);

/// Tries to identify the root inside an isolating interval as a rational
/// number: repeatedly refines the interval and tests the simplest rational
/// inside it, giving up once that candidate's denominator exceeds
/// 2^max_denominator_bits. Returns nullopt when the root appears irrational
/// within the budget (never misidentifies: a returned value is verified to
/// be a root lying in the interval).
std::optional<Rational> reconstruct_rational_root(const UPoly& p,
                                                  RootInterval iv,
                                                  unsigned max_denominator_bits = 256);

}  // namespace epi
