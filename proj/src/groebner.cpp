#include "epi/groebner.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "epi/essential.hpp"

namespace epi {

namespace {

int total_deg(const ExpVec& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

// Strict "smaller monomial" comparison under the given order.
bool mono_less(const ExpVec& a, const ExpVec& b, MonomialOrder ord) {
  if (ord == MonomialOrder::Lex) {
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
  // Degrevlex: compare total degree, then the *last* differing exponent,
  // where a larger exponent late in the vector makes the monomial smaller.
  const int da = total_deg(a), db = total_deg(b);
  if (da != db) return da < db;
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

bool mono_divides(const ExpVec& a, const ExpVec& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

ExpVec mono_lcm(const ExpVec& a, const ExpVec& b) {
  ExpVec l(a.size());
  for (size_t i = 0; i < a.size(); ++i) l[i] = std::max(a[i], b[i]);
  return l;
}

ExpVec mono_sub(const ExpVec& a, const ExpVec& b) {
  ExpVec d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

ExpVec mono_add(const ExpVec& a, const ExpVec& b) {
  ExpVec s(a.size());
  for (size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  return s;
}

struct Term {
  ExpVec e;
  Rational c;
};

// Polynomial as a term vector sorted descending under the active order.
// The leading term is t.front().
struct GPoly {
  std::vector<Term> t;
  bool is_zero() const { return t.empty(); }
  const Term& lt() const { return t.front(); }
};

GPoly from_mpoly(const MPoly& p, MonomialOrder ord) {
  GPoly g;
  g.t.reserve(static_cast<size_t>(p.num_terms()));
  for (const auto& [e, c] : p.terms()) g.t.push_back({e, c});
  std::sort(g.t.begin(), g.t.end(), [ord](const Term& a, const Term& b) {
    return mono_less(b.e, a.e, ord);
  });
  return g;
}

MPoly to_mpoly(const GPoly& g, int nv) {
  MPoly p(nv);
  for (const auto& term : g.t) p.add_term(term.e, term.c);
  return p;
}

// a - s * x^m * b, by merging the two descending term lists.
GPoly submul(const GPoly& a, const Rational& s, const ExpVec& m, const GPoly& b,
             MonomialOrder ord) {
  GPoly r;
  r.t.reserve(a.t.size() + b.t.size());
  size_t i = 0, j = 0;
  while (i < a.t.size() || j < b.t.size()) {
    if (j == b.t.size()) {
      r.t.push_back(a.t[i++]);
      continue;
    }
    const ExpVec eb = mono_add(b.t[j].e, m);
    if (i == a.t.size()) {
      r.t.push_back({eb, -(s * b.t[j].c)});
      ++j;
      continue;
    }
    if (a.t[i].e == eb) {
      Rational c = a.t[i].c - s * b.t[j].c;
      if (!c.is_zero()) r.t.push_back({a.t[i].e, std::move(c)});
      ++i;
      ++j;
    } else if (mono_less(eb, a.t[i].e, ord)) {
      r.t.push_back(a.t[i++]);
    } else {
      r.t.push_back({eb, -(s * b.t[j].c)});
      ++j;
    }
  }
  return r;
}

// Scales so the coefficients are coprime integers with positive leading
// coefficient; keeps intermediate results small during basis computation.
void make_primitive(GPoly& g) {
  if (g.is_zero()) return;
  Integer den_lcm = 1;
  for (const auto& term : g.t) den_lcm = lcm(den_lcm, Integer(term.c.den()));
  Integer num_gcd = 0;
  for (const auto& term : g.t)
    num_gcd = gcd(num_gcd, Integer(term.c.num() * (den_lcm / term.c.den())));
  Rational s{den_lcm, num_gcd};
  if (g.lt().c.sign() < 0) s = -s;
  for (auto& term : g.t) term.c *= s;
}

void make_monic(GPoly& g) {
  if (g.is_zero()) return;
  const Rational inv = g.lt().c.reciprocal();
  for (auto& term : g.t) term.c *= inv;
}

// Joint rescaling of a partially built remainder: r holds the terms already
// frozen, p the still-reducible tail. Both must be scaled by the same factor
// or the assembled result would mix scales and stop being a rational multiple
// of the true remainder.
void make_primitive_pair(GPoly& r, GPoly& p) {
  if (r.is_zero() && p.is_zero()) return;
  Integer den_lcm = 1;
  for (const auto& term : r.t) den_lcm = lcm(den_lcm, Integer(term.c.den()));
  for (const auto& term : p.t) den_lcm = lcm(den_lcm, Integer(term.c.den()));
  Integer num_gcd = 0;
  for (const auto& term : r.t)
    num_gcd = gcd(num_gcd, Integer(term.c.num() * (den_lcm / term.c.den())));
  for (const auto& term : p.t)
    num_gcd = gcd(num_gcd, Integer(term.c.num() * (den_lcm / term.c.den())));
  Rational s{den_lcm, num_gcd};
  const Rational& lead = r.is_zero() ? p.lt().c : r.lt().c;
  if (lead.sign() < 0) s = -s;
  for (auto& term : r.t) term.c *= s;
  for (auto& term : p.t) term.c *= s;
}

// Full division remainder: every term of the result is reducible by no
// leading term of the basis. With `rescale` the running polynomial is made
// primitive after each reduction step (allowed whenever only the ideal class
// of the result matters, not its exact value).
GPoly reduce(GPoly p, const std::vector<GPoly>& basis, MonomialOrder ord,
             bool rescale) {
  GPoly r;
  while (!p.is_zero()) {
    bool reduced = false;
    for (const auto& b : basis) {
      if (b.is_zero()) continue;
      if (mono_divides(b.lt().e, p.lt().e)) {
        const Rational s = p.lt().c / b.lt().c;
        p = submul(p, s, mono_sub(p.lt().e, b.lt().e), b, ord);
        if (rescale) make_primitive_pair(r, p);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      r.t.push_back(p.lt());
      p.t.erase(p.t.begin());
    }
  }
  return r;
}

GPoly s_poly(const GPoly& f, const GPoly& g, MonomialOrder ord) {
  const ExpVec l = mono_lcm(f.lt().e, g.lt().e);
  // lcm/lt(f) * f / lc(f)  -  lcm/lt(g) * g / lc(g)
  GPoly left = submul(GPoly{}, -f.lt().c.reciprocal(), mono_sub(l, f.lt().e), f, ord);
  return submul(left, g.lt().c.reciprocal(), mono_sub(l, g.lt().e), g, ord);
}

}  // namespace

std::vector<MPoly> buchberger(const std::vector<MPoly>& gens,
                              MonomialOrder ord) {
  if (gens.empty()) return {};
  const int nv = gens.front().num_vars();

  std::vector<GPoly> basis;
  for (const auto& g : gens) {
    if (g.num_vars() != nv)
      throw std::invalid_argument("buchberger: mixed variable counts");
    if (g.is_zero()) continue;
    GPoly gp = from_mpoly(g, ord);
    make_primitive(gp);
    basis.push_back(std::move(gp));
  }

  struct Pair {
    size_t i, j;
    ExpVec lcm;
  };
  std::vector<Pair> pending;
  std::set<std::pair<size_t, size_t>> pending_keys;
  auto push_pair = [&](size_t i, size_t j) {
    pending.push_back({i, j, mono_lcm(basis[i].lt().e, basis[j].lt().e)});
    pending_keys.insert({i, j});
  };
  for (size_t j = 1; j < basis.size(); ++j)
    for (size_t i = 0; i < j; ++i) push_pair(i, j);

  while (!pending.empty()) {
    // Normal selection: smallest lcm under the order.
    size_t best = 0;
    for (size_t k = 1; k < pending.size(); ++k)
      if (mono_less(pending[k].lcm, pending[best].lcm, ord)) best = k;
    const Pair pr = pending[best];
    pending.erase(pending.begin() + static_cast<long>(best));
    pending_keys.erase({pr.i, pr.j});

    // First criterion: coprime leading monomials reduce to zero.
    if (pr.lcm == mono_add(basis[pr.i].lt().e, basis[pr.j].lt().e)) continue;
    // Chain criterion: an intermediate k whose leading term divides the lcm
    // and whose pairs with i and j were both already handled.
    bool skip = false;
    for (size_t k = 0; k < basis.size() && !skip; ++k) {
      if (k == pr.i || k == pr.j || basis[k].is_zero()) continue;
      if (!mono_divides(basis[k].lt().e, pr.lcm)) continue;
      const auto key_ik = std::minmax(pr.i, k), key_jk = std::minmax(pr.j, k);
      if (!pending_keys.count({key_ik.first, key_ik.second}) &&
          !pending_keys.count({key_jk.first, key_jk.second}))
        skip = true;
    }
    if (skip) continue;

    GPoly r = reduce(s_poly(basis[pr.i], basis[pr.j], ord), basis, ord, true);
    if (r.is_zero()) continue;
    make_primitive(r);
    basis.push_back(std::move(r));
    for (size_t i = 0; i + 1 < basis.size(); ++i)
      if (!basis[i].is_zero()) push_pair(i, basis.size() - 1);
  }

  // Minimalise: drop elements whose leading term another one divides.
  for (size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].is_zero()) continue;
    for (size_t k = 0; k < basis.size(); ++k) {
      if (k == i || basis[k].is_zero()) continue;
      if (mono_divides(basis[k].lt().e, basis[i].lt().e) &&
          (basis[k].lt().e != basis[i].lt().e || k < i)) {
        basis[i].t.clear();
        break;
      }
    }
  }
  // Reduce: replace each element by its remainder against the others.
  std::vector<GPoly> minimal;
  for (auto& g : basis)
    if (!g.is_zero()) minimal.push_back(std::move(g));
  std::vector<GPoly> reduced;
  for (size_t i = 0; i < minimal.size(); ++i) {
    std::vector<GPoly> others;
    for (size_t k = 0; k < minimal.size(); ++k)
      if (k != i) others.push_back(minimal[k]);
    GPoly r = reduce(minimal[i], others, ord, false);
    make_monic(r);
    reduced.push_back(std::move(r));
  }
  std::sort(reduced.begin(), reduced.end(), [ord](const GPoly& a, const GPoly& b) {
    return mono_less(a.lt().e, b.lt().e, ord);
  });
  std::vector<MPoly> out;
  out.reserve(reduced.size());
  for (const auto& g : reduced) out.push_back(to_mpoly(g, nv));
  return out;
}

MPoly normal_form(const MPoly& f, const std::vector<MPoly>& basis,
                  MonomialOrder ord) {
  std::vector<GPoly> b;
  b.reserve(basis.size());
  for (const auto& g : basis)
    if (!g.is_zero()) b.push_back(from_mpoly(g, ord));
  return to_mpoly(reduce(from_mpoly(f, ord), b, ord, false), f.num_vars());
}

bool projective_empty(const std::vector<MPoly>& homogeneous_gens) {
  std::vector<MPoly> gens;
  for (const auto& g : homogeneous_gens)
    if (!g.is_zero()) gens.push_back(g);
  if (gens.empty()) return false;
  const int nv = gens.front().num_vars();
  const auto gb = buchberger(gens, MonomialOrder::DegRevLex);
  for (const auto& g : gb)
    if (g.total_degree() == 0) return true;  // ideal is (1)
  // The affine cone is {0} iff some pure power of every variable leads.
  for (int v = 0; v < nv; ++v) {
    bool found = false;
    for (const auto& g : gb) {
      const GPoly gp = from_mpoly(g, MonomialOrder::DegRevLex);
      const ExpVec& e = gp.lt().e;
      bool pure = e[static_cast<size_t>(v)] > 0;
      for (int w = 0; w < nv && pure; ++w)
        if (w != v && e[static_cast<size_t>(w)] != 0) pure = false;
      if (pure) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

UPoly to_upoly(const MPoly& p) {
  int var = -1;
  int deg = 0;
  for (const auto& [e, c] : p.terms()) {
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (var == -1) var = static_cast<int>(i);
      if (static_cast<int>(i) != var)
        throw std::invalid_argument("to_upoly: more than one variable occurs");
      deg = std::max(deg, e[i]);
    }
  }
  std::vector<Rational> c(static_cast<size_t>(deg) + 1);
  for (const auto& [e, coef] : p.terms()) {
    const int d = var == -1 ? 0 : e[static_cast<size_t>(var)];
    c[static_cast<size_t>(d)] = coef;
  }
  return UPoly(std::move(c));
}

namespace {

// Chart solutions of a zero-dimensional lex basis in shape-lemma form:
// {g(t), v_i - h_i(t)} with t the lex-smallest variable. Returns the number
// of distinct real solutions, or nullopt when the basis is not that shape.
std::optional<int> count_real_shape(const std::vector<MPoly>& gb, int nv) {
  if (static_cast<int>(gb.size()) != nv) return std::nullopt;
  const int last = nv - 1;
  std::optional<UPoly> g;
  std::vector<bool> seen(static_cast<size_t>(nv), false);
  for (const auto& p : gb) {
    const GPoly gp = from_mpoly(p, MonomialOrder::Lex);
    const ExpVec& e = gp.lt().e;
    // Univariate in the last variable?
    bool only_last = true;
    for (int v = 0; v < last; ++v)
      if (e[static_cast<size_t>(v)] != 0) only_last = false;
    if (only_last) {
      if (g.has_value()) return std::nullopt;
      g = to_upoly(p);
      continue;
    }
    // Otherwise require  v_i - h_i(t):  leading term exactly v_i, all other
    // terms in the last variable alone.
    int lead_var = -1;
    for (int v = 0; v < nv; ++v) {
      if (e[static_cast<size_t>(v)] == 0) continue;
      if (lead_var != -1 || e[static_cast<size_t>(v)] != 1) return std::nullopt;
      lead_var = v;
    }
    if (lead_var == -1 || lead_var == last || seen[static_cast<size_t>(lead_var)])
      return std::nullopt;
    for (const auto& [ee, cc] : p.terms()) {
      (void)cc;
      if (ee == e) continue;
      for (int v = 0; v < last; ++v)
        if (ee[static_cast<size_t>(v)] != 0) return std::nullopt;
    }
    seen[static_cast<size_t>(lead_var)] = true;
  }
  if (!g.has_value() || g->degree() < 1) return std::nullopt;
  for (int v = 0; v < last; ++v)
    if (!seen[static_cast<size_t>(v)]) return std::nullopt;
  return sturm_count(*g, std::nullopt, std::nullopt);
}

}  // namespace

RealCountResult count_real_rank5(const Pencil& kernel4) {
  const int t = kernel4.dim();
  const std::vector<MPoly> cubics = demazure_system(kernel4);

  int total = 0;
  // Charts w_0 = 1; w_0 = 0, w_1 = 1; ...; they partition projective space,
  // so the per-chart counts add without overlap.
  for (int k = 0; k < t; ++k) {
    std::vector<std::optional<Rational>> assign(static_cast<size_t>(t),
                                                std::nullopt);
    for (int i = 0; i < k; ++i) assign[static_cast<size_t>(i)] = Rational(0);
    assign[static_cast<size_t>(k)] = Rational(1);

    if (k == t - 1) {
      // Single point (0, ..., 0, 1).
      bool all_zero = true;
      for (const auto& c : cubics)
        if (!c.specialize(assign).coeff({}).is_zero()) all_zero = false;
      if (all_zero) ++total;
      continue;
    }

    std::vector<MPoly> chart;
    bool all_identically_zero = true;
    for (const auto& c : cubics) {
      MPoly s = c.specialize(assign);
      if (!s.is_zero()) all_identically_zero = false;
      chart.push_back(std::move(s));
    }
    if (all_identically_zero) return {0, false};  // positive-dimensional chart

    const int nv = t - 1 - k;
    // Two-stage elimination: the degrevlex basis is cheap to compute and,
    // used as the generating set, makes the lex run orders of magnitude
    // faster than starting from the raw cubics (same ideal, same reduced
    // lex basis either way).
    const auto drl = buchberger(chart, MonomialOrder::DegRevLex);
    const auto gb = buchberger(drl, MonomialOrder::Lex);
    if (gb.size() == 1 && gb.front().total_degree() == 0) continue;  // empty
    if (gb.empty()) return {0, false};

    if (nv == 1) {
      // Principal ideal: count real roots of its generator directly.
      if (gb.size() != 1) return {0, false};
      const UPoly g = to_upoly(gb.front());
      if (g.degree() < 1) return {0, false};
      total += sturm_count(g, std::nullopt, std::nullopt);
      continue;
    }
    const auto n = count_real_shape(gb, nv);
    if (!n.has_value()) return {0, false};
    total += *n;
  }
  return {total, true};
}

}  // namespace epi
