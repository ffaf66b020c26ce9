#include "epi/mpoly.hpp"

#include <cassert>
#include <numeric>
#include <stdexcept>

namespace epi {

MPoly MPoly::constant(int num_vars, const Rational& c) {
  MPoly p(num_vars);
  p.add_term(ExpVec(num_vars, 0), c);
  return p;
}

MPoly MPoly::variable(int num_vars, int i) {
  assert(0 <= i && i < num_vars);
  MPoly p(num_vars);
  ExpVec e(num_vars, 0);
  e[i] = 1;
  p.add_term(e, Rational(1));
  return p;
}

MPoly MPoly::linear_form(const RatVec& coeffs) {
  MPoly p(static_cast<int>(coeffs.size()));
  for (size_t i = 0; i < coeffs.size(); ++i) {
    ExpVec e(coeffs.size(), 0);
    e[i] = 1;
    p.add_term(e, coeffs[i]);
  }
  return p;
}

int MPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_)
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

bool MPoly::is_homogeneous(int d) const {
  for (const auto& [e, c] : terms_)
    if (std::accumulate(e.begin(), e.end(), 0) != d) return false;
  return true;
}

Rational MPoly::coeff(const ExpVec& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void MPoly::add_term(const ExpVec& e, const Rational& c) {
  assert(static_cast<int>(e.size()) == nv_);
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Rational MPoly::eval(const RatVec& point) const {
  assert(static_cast<int>(point.size()) == nv_);
  Rational acc;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nv_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    acc += t;
  }
  return acc;
}

MPoly MPoly::specialize(const std::vector<std::optional<Rational>>& assign) const {
  assert(static_cast<int>(assign.size()) == nv_);
  int kept = 0;
  for (const auto& a : assign)
    if (!a) ++kept;
  MPoly out(kept);
  for (const auto& [e, c] : terms_) {
    Rational coeff = c;
    ExpVec ne;
    ne.reserve(kept);
    for (int i = 0; i < nv_; ++i) {
      if (assign[i]) {
        for (int k = 0; k < e[i]; ++k) coeff *= *assign[i];
      } else {
        ne.push_back(e[i]);
      }
    }
    out.add_term(ne, coeff);
  }
  return out;
}

MPoly operator+(const MPoly& a, const MPoly& b) {
  assert(a.nv_ == b.nv_);
  MPoly r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, c);
  return r;
}

MPoly operator-(const MPoly& a, const MPoly& b) {
  assert(a.nv_ == b.nv_);
  MPoly r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
  return r;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  assert(a.nv_ == b.nv_);
  MPoly r(a.nv_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      ExpVec e = ea;
      for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

MPoly operator*(const Rational& s, const MPoly& a) {
  MPoly r(a.nv_);
  if (s.is_zero()) return r;
  r.terms_ = a.terms_;
  for (auto& [e, c] : r.terms_) c *= s;
  return r;
}

MPoly pow(const MPoly& p, int e) {
  assert(e >= 0);
  MPoly r = MPoly::constant(p.num_vars(), Rational(1));
  for (int i = 0; i < e; ++i) r = r * p;
  return r;
}

UPoly restrict_to_line(const MPoly& p, const RatVec& base, const RatVec& dir) {
  assert(static_cast<int>(base.size()) == p.num_vars());
  assert(base.size() == dir.size());
  UPoly acc;
  for (const auto& [e, c] : p.terms()) {
    UPoly term = UPoly::constant(c);
    for (size_t i = 0; i < base.size(); ++i) {
      const UPoly lin({base[i], dir[i]});
      for (int k = 0; k < e[i]; ++k) term = term * lin;
    }
    acc = acc + term;
  }
  return acc;
}

RatMatrix Pencil::evaluate(const RatVec& u) const {
  assert(static_cast<int>(u.size()) == dim());
  RatMatrix m(3, 3);
  for (int k = 0; k < dim(); ++k)
    if (!u[k].is_zero()) m = m + u[k] * mats[k];
  return m;
}

MPoly Pencil::entry(int i, int j) const {
  RatVec coeffs(dim());
  for (int k = 0; k < dim(); ++k) coeffs[k] = mats[k].at(i, j);
  return MPoly::linear_form(coeffs);
}

MPoly pencil_det(const Pencil& p) {
  const int t = p.dim();
  if (t == 0) return MPoly(0);
  auto e = [&](int i, int j) { return p.entry(i, j); };
  // Cofactor expansion along the first row; entries are linear forms.
  const MPoly m00 = e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1);
  const MPoly m01 = e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0);
  const MPoly m02 = e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0);
  return e(0, 0) * m00 - e(0, 1) * m01 + e(0, 2) * m02;
}

std::array<std::array<MPoly, 3>, 3> pencil_minors(const Pencil& p) {
  std::array<std::array<MPoly, 3>, 3> q;
  const int rows[3][2] = {{1, 2}, {0, 2}, {0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = rows[i][0], r1 = rows[i][1];
      const int c0 = rows[j][0], c1 = rows[j][1];
      q[i][j] = p.entry(r0, c0) * p.entry(r1, c1) -
                p.entry(r0, c1) * p.entry(r1, c0);
    }
  return q;
}

bool all_minors_zero(const std::array<std::array<MPoly, 3>, 3>& q) {
  for (const auto& row : q)
    for (const auto& m : row)
      if (!m.is_zero()) return false;
  return true;
}

std::optional<CubeForm> as_cube_of_linear_form(const MPoly& p) {
  if (p.is_zero()) return std::nullopt;
  if (!p.is_homogeneous(3))
    throw std::invalid_argument(
        "as_cube_of_linear_form: input must be a homogeneous cubic");
  const int t = p.num_vars();

  // If p = c*(b.u)^3 with first nonzero b_i, then u_i^3 carries coefficient
  // c*b_i^3 != 0 and is the first pure cube present; the mixed u_i^2 u_j
  // coefficients then determine all other coordinates of b.
  int i = -1;
  Rational c;
  for (int k = 0; k < t; ++k) {
    ExpVec e(t, 0);
    e[k] = 3;
    c = p.coeff(e);
    if (!c.is_zero()) { i = k; break; }
  }
  if (i < 0) return std::nullopt;

  RatVec b(t, Rational(0));
  b[i] = Rational(1);
  for (int j = 0; j < t; ++j) {
    if (j == i) continue;
    ExpVec e(t, 0);
    e[i] = 2;
    e[j] = 1;
    b[j] = p.coeff(e) / (Rational(3) * c);
  }

  if (!(p == c * pow(MPoly::linear_form(b), 3))) return std::nullopt;
  return CubeForm{c, b};
}

Pencil restrict_to_hyperplane(const Pencil& p, const RatVec& b) {
  assert(static_cast<int>(b.size()) == p.dim());
  assert(!is_zero_vec(b));
  RatMatrix row(1, p.dim());
  for (int k = 0; k < p.dim(); ++k) row.at(0, k) = b[k];
  Pencil out;
  for (const RatVec& w : kernel_basis(row)) {
    RatMatrix m(3, 3);
    for (int k = 0; k < p.dim(); ++k)
      if (!w[k].is_zero()) m = m + w[k] * p.mats[k];
    out.mats.push_back(m);
  }
  return out;
}

}  // namespace epi
