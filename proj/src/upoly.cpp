#include "epi/upoly.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace epi {

namespace {

Integer floor_q(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.num().get_mpz_t(), q.den().get_mpz_t());
  return r;
}

Integer ceil_q(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.num().get_mpz_t(), q.den().get_mpz_t());
  return r;
}

}  // namespace

Rational UPoly::eval(const Rational& x) const {
  Rational acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int UPoly::sign_at_infinity(int dir) const {
  if (is_zero()) return 0;
  int s = leading().sign();
  if (dir < 0 && degree() % 2 == 1) s = -s;
  return s;
}

UPoly UPoly::derivative() const {
  if (degree() < 1) return UPoly();
  std::vector<Rational> d(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = Rational(long(i)) * c_[i];
  return UPoly(std::move(d));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.c_.size()) c[i] += a.c_[i];
    if (i < b.c_.size()) c[i] += b.c_[i];
  }
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.c_.size()) c[i] += a.c_[i];
    if (i < b.c_.size()) c[i] -= b.c_[i];
  }
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(c));
}

UPoly operator*(const Rational& s, const UPoly& a) {
  std::vector<Rational> c = a.c_;
  for (auto& x : c) x *= s;
  return UPoly(std::move(c));
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::domain_error("UPoly::divmod: zero divisor");
  std::vector<Rational> rem = a.c_;
  const int db = b.degree();
  const int dq = a.degree() - db;
  if (dq < 0) return {UPoly(), a};
  std::vector<Rational> quot(static_cast<size_t>(dq) + 1);
  const Rational inv = b.leading().reciprocal();
  for (int k = dq; k >= 0; --k) {
    const Rational f = rem[static_cast<size_t>(k + db)] * inv;
    if (f.is_zero()) continue;
    quot[static_cast<size_t>(k)] = f;
    for (int j = 0; j <= db; ++j)
      rem[static_cast<size_t>(k + j)] -= f * b.c_[static_cast<size_t>(j)];
  }
  return {UPoly(std::move(quot)), UPoly(std::move(rem))};
}

UPoly UPoly::deflate_root(const Rational& a) const {
  auto [q, r] = divmod(*this, UPoly({-a, Rational(1)}));
  if (!r.is_zero())
    throw std::invalid_argument("UPoly::deflate_root: not a root");
  return q;
}

UPoly UPoly::primitive() const {
  if (is_zero()) return *this;
  Integer den_lcm = 1;
  for (const auto& q : c_) den_lcm = lcm(den_lcm, Integer(q.den()));
  Integer num_gcd = 0;
  for (const auto& q : c_) num_gcd = gcd(num_gcd, Integer(q.num() * (den_lcm / q.den())));
  const Rational s{den_lcm, num_gcd};
  return s * *this;
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  return leading().reciprocal() * *this;
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a.primitive(), y = b.primitive();
  while (!y.is_zero()) {
    UPoly r = UPoly::divmod(x, y).second.primitive();
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() < 1) return p;
  const UPoly g = gcd(p, p.derivative());
  return UPoly::divmod(p, g).first.primitive();
}

SturmChain SturmChain::build(const UPoly& p) {
  SturmChain ch;
  ch.seq.push_back(p.primitive());
  UPoly d = p.derivative();
  if (!d.is_zero()) ch.seq.push_back(d.primitive());
  while (ch.seq.size() >= 2 && ch.seq.back().degree() > 0) {
    const UPoly& s0 = ch.seq[ch.seq.size() - 2];
    const UPoly& s1 = ch.seq.back();
    UPoly r = UPoly::divmod(s0, s1).second;
    if (r.is_zero()) break;
    ch.seq.push_back((Rational(-1) * r).primitive());
  }
  return ch;
}

namespace {

int count_variations(const std::vector<int>& signs) {
  int v = 0, prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

}  // namespace

int SturmChain::variations_at(const Rational& x) const {
  std::vector<int> signs;
  signs.reserve(seq.size());
  for (const auto& p : seq) signs.push_back(p.sign_at(x));
  return count_variations(signs);
}

int SturmChain::variations_at_infinity(int dir) const {
  std::vector<int> signs;
  signs.reserve(seq.size());
  for (const auto& p : seq) signs.push_back(p.sign_at_infinity(dir));
  return count_variations(signs);
}

int sturm_count(const UPoly& p, const std::optional<Rational>& a,
                const std::optional<Rational>& b) {
  if (p.is_zero())
    throw std::invalid_argument("sturm_count: zero polynomial");
  if (a && b && *a >= *b) return 0;
  const int bonus = (b && p.sign_at(*b) == 0) ? 1 : 0;
  UPoly q = squarefree_part(p);
  if (a && q.sign_at(*a) == 0) q = q.deflate_root(*a);
  if (b && q.sign_at(*b) == 0) q = q.deflate_root(*b);
  if (q.degree() < 1) return bonus;
  const SturmChain ch = SturmChain::build(q);
  const int va = a ? ch.variations_at(*a) : ch.variations_at_infinity(-1);
  const int vb = b ? ch.variations_at(*b) : ch.variations_at_infinity(+1);
  return va - vb + bonus;
}

namespace {

// A bisection point in (lo, hi) that is not a root of q: the midpoint, moved
// halfway towards lo while it keeps landing on roots (at most deg(q) moves).
Rational nonroot_split_point(const UPoly& q, const Rational& lo,
                             const Rational& hi) {
  Rational m = (lo + hi) / Rational(2);
  Rational span = (hi - lo) / Rational(4);
  while (q.sign_at(m) == 0) {
    m = m - span;
    span = span / Rational(2);
  }
  return m;
}

}  // namespace

std::vector<RootInterval> isolate_real_roots(const UPoly& p) {
  if (p.is_zero())
    throw std::invalid_argument("isolate_real_roots: zero polynomial");
  UPoly q = squarefree_part(p);
  std::vector<RootInterval> out;
  if (q.degree() < 1) return out;

  // Cauchy bound: every real root has |x| <= 1 + max |c_i| / |c_n|.
  Rational maxabs;
  for (int i = 0; i < q.degree(); ++i) {
    const Rational m = q.coeff(i).abs();
    if (m > maxabs) maxabs = m;
  }
  const Rational bound = Rational(1) + maxabs / q.leading().abs();
  const Rational lo = -bound - Rational(1), hi = bound + Rational(1);

  const SturmChain ch = SturmChain::build(q);
  struct Seg {
    Rational lo, hi;
    int count;  // distinct roots strictly inside (lo, hi); endpoints non-root
  };
  std::vector<Seg> work;
  const int total = ch.variations_at(lo) - ch.variations_at(hi);
  if (total > 0) work.push_back({lo, hi, total});

  while (!work.empty()) {
    Seg s = work.back();
    work.pop_back();
    if (s.count == 1) {
      out.push_back({s.lo, s.hi});
      continue;
    }
    const Rational m = nonroot_split_point(q, s.lo, s.hi);
    const int left = ch.variations_at(s.lo) - ch.variations_at(m);
    if (left > 0) work.push_back({s.lo, m, left});
    if (s.count - left > 0) work.push_back({m, s.hi, s.count - left});
  }
  std::sort(out.begin(), out.end(),
            [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
  return out;
}

RootInterval refine_root(const UPoly& p, RootInterval iv, const Rational& width) {
  if (iv.exact()) return iv;
  const UPoly q = squarefree_part(p);
  int slo = q.sign_at(iv.lo);
  assert(slo != 0 && q.sign_at(iv.hi) != 0 && slo != q.sign_at(iv.hi));
  while (iv.width() > width) {
    const Rational m = iv.mid();
    const int sm = q.sign_at(m);
    if (sm == 0) return {m, m};
    if (sm == slo)
      iv.lo = m;
    else
      iv.hi = m;
  }
  return iv;
}

Rational simplest_rational_in(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::invalid_argument("simplest_rational_in: empty interval");
  if (lo.sign() <= 0 && hi.sign() >= 0) return Rational(0);
  if (hi.sign() < 0) return -simplest_rational_in(-hi, -lo);
  // 0 < lo <= hi
  const Integer c = ceil_q(lo);
  if (Rational(c) <= hi) return Rational(c);
  const Integer n = floor_q(lo);
  const Rational fr = simplest_rational_in((hi - Rational(n)).reciprocal(),
                                           (lo - Rational(n)).reciprocal());
  return Rational(n) + fr.reciprocal();
}

std::optional<Rational> reconstruct_rational_root(const UPoly& p,
                                                  RootInterval iv,
                                                  unsigned max_denominator_bits) {
  if (iv.exact()) {
    if (p.sign_at(iv.lo) == 0) return iv.lo;
    return std::nullopt;
  }
  const UPoly q = squarefree_part(p);
  // Once the interval is narrower than 1/(d*(d+1)) for the denominator bound
  // d, a rational root within the bound would itself be the simplest rational
  // inside; falling through that width without a hit proves irrationality
  // relative to the budget.
  Integer w_den;
  mpz_ui_pow_ui(w_den.get_mpz_t(), 2, 2 * max_denominator_bits + 8);
  const Rational w_min(Integer(1), w_den);
  while (true) {
    const Rational cand = simplest_rational_in(iv.lo, iv.hi);
    if (cand > iv.lo && cand < iv.hi && q.sign_at(cand) == 0) return cand;
    if (mpz_sizeinbase(cand.den().get_mpz_t(), 2) > max_denominator_bits)
      return std::nullopt;
    if (iv.width() < w_min) return std::nullopt;
    iv = refine_root(q, iv, iv.width() / Rational(256));
    if (iv.exact()) return iv.lo;
  }
}

}  // namespace epi
