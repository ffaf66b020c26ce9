#include "epi/rational.hpp"

#include <cctype>
#include <ostream>

namespace epi {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rational> Rational::parse(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = (s[0] == '-');
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;

  auto signed_value = [&](Rational q) {
    return negative ? -q : q;
  };

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const std::string_view num = s.substr(0, slash);
    const std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    const Integer d(std::string(den), 10);
    if (sgn(d) == 0) return std::nullopt;
    return signed_value(Rational(Integer(std::string(num), 10), d));
  }

  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = s.substr(0, dot);
    const std::string_view frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!whole.empty() && !all_digits(whole)) return std::nullopt;
    if (!frac.empty() && !all_digits(frac)) return std::nullopt;
    std::string digits;
    digits.append(whole);
    digits.append(frac);
    return signed_value(
        Rational(Integer(digits.empty() ? "0" : digits, 10),
                 pow10(static_cast<unsigned>(frac.size()))));
  }

  if (!all_digits(s)) return std::nullopt;
  return signed_value(Rational(Integer(std::string(s), 10)));
}

std::ostream& operator<<(std::ostream& os, const Rational& q) {
  return os << q.str();
}

bool is_perfect_square(const Rational& q, Rational* root) {
  if (q.sign() < 0) return false;
  const Integer n = q.num();
  const Integer d = q.den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) ||
      !mpz_perfect_square_p(d.get_mpz_t()))
    return false;
  if (root) *root = Rational(sqrt(n), sqrt(d));
  return true;
}

Integer pow10(unsigned k) {
  Integer z;
  mpz_ui_pow_ui(z.get_mpz_t(), 10, k);
  return z;
}

}  // namespace epi
