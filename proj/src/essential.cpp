#include "epi/essential.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "epi/groebner.hpp"
#include "epi/upoly.hpp"

namespace epi {

const char* to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
  }
}

RatVec demazure(const RatMatrix& E) {
  if (E.rows() != 3 || E.cols() != 3)
    throw std::invalid_argument("demazure: 3x3 input required");
  const RatMatrix S = E * E.transpose();
  const Rational tr = S.at(0, 0) + S.at(1, 1) + S.at(2, 2);
  const RatMatrix P = Rational(2) * (S * E) - tr * E;
  RatVec out(10);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[static_cast<size_t>(3 * i + j)] = P.at(i, j);
  out[9] = determinant(E);
  return out;
}

bool demazure_vanishes(const RatMatrix& E) {
  for (const auto& v : demazure(E))
    if (!v.is_zero()) return false;
  return true;
}

namespace {

using MMat = std::array<std::array<MPoly, 3>, 3>;

MMat symbolic_pencil_matrix(const Pencil& p) {
  MMat m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = p.entry(i, j);
  return m;
}

MMat mmul(const MMat& a, const MMat& b, int nv) {
  MMat c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      MPoly s(nv);
      for (int k = 0; k < 3; ++k)
        s = s + a[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                    b[static_cast<size_t>(k)][static_cast<size_t>(j)];
      c[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::move(s);
    }
  return c;
}

MMat mtranspose(const MMat& a) {
  MMat t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t[static_cast<size_t>(i)][static_cast<size_t>(j)] = a[static_cast<size_t>(j)][static_cast<size_t>(i)];
  return t;
}

}  // namespace

std::vector<MPoly> demazure_system(const Pencil& p) {
  const int nv = p.dim();
  const MMat m = symbolic_pencil_matrix(p);
  const MMat s = mmul(m, mtranspose(m), nv);
  const MPoly tr = s[0][0] + s[1][1] + s[2][2];
  const MMat sm = mmul(s, m, nv);
  std::vector<MPoly> out;
  out.reserve(10);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.push_back(Rational(2) * sm[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                    tr * m[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  out.push_back(pencil_det(p));
  return out;
}

RatMatrix build_R(const RatVec& u, const RatVec& v) {
  if (u.size() != 9 || v.size() != 9)
    throw std::invalid_argument("build_R: 9-vectors required");
  RatMatrix uv(2, 9);
  for (int k = 0; k < 9; ++k) {
    uv.at(0, k) = u[static_cast<size_t>(k)];
    uv.at(1, k) = v[static_cast<size_t>(k)];
  }
  if (rank(uv) != 2)
    throw std::invalid_argument("build_R: vectors must be independent");

  auto at = [&](const Rational& l, const Rational& m) {
    RatVec w(9);
    for (size_t k = 0; k < 9; ++k) w[k] = l * u[k] + m * v[k];
    return demazure(mat3_from_vec9(w));
  };
  const RatVec d10 = at(Rational(1), Rational(0));
  const RatVec d01 = at(Rational(0), Rational(1));
  const RatVec d11 = at(Rational(1), Rational(1));
  const RatVec d1m = at(Rational(1), Rational(-1));

  RatMatrix r(10, 4);
  const Rational half(1, 2);
  for (int j = 0; j < 10; ++j) {
    const size_t k = static_cast<size_t>(j);
    const Rational s = d11[k] - d10[k] - d01[k];   // r2 + r3
    const Rational t = d1m[k] - d10[k] + d01[k];   // r3 - r2
    r.at(j, 0) = d10[k];
    r.at(j, 1) = half * (s - t);
    r.at(j, 2) = half * (s + t);
    r.at(j, 3) = d01[k];
  }
  return r;
}

RatMatrix bezout_matrix_cubics(const RatVec& a, const RatVec& b) {
  if (a.size() != 4 || b.size() != 4)
    throw std::invalid_argument("bezout_matrix_cubics: 4 coefficients each");
  auto br = [&](int i, int j) {
    return a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)] -
           a[static_cast<size_t>(j)] * b[static_cast<size_t>(i)];
  };
  // Bezoutiant of the dehomogenised cubics: entry (i, j) is the coefficient
  // of x^i y^j in (f(x) g(y) - f(y) g(x)) / (x - y), with f, g written
  // highest-degree first as a[0] x^3 + a[1] x^2 + a[2] x + a[3].
  RatMatrix m(3, 3);
  m.at(0, 0) = br(2, 3);
  m.at(0, 1) = m.at(1, 0) = br(1, 3);
  m.at(0, 2) = m.at(2, 0) = br(0, 3);
  m.at(1, 1) = br(0, 3) + br(1, 2);
  m.at(1, 2) = m.at(2, 1) = br(0, 2);
  m.at(2, 2) = br(0, 1);
  return m;
}

Rational chow_twisted_cubic(const RatMatrix& rows2x4) {
  if (rows2x4.rows() != 2 || rows2x4.cols() != 4)
    throw std::invalid_argument("chow_twisted_cubic: 2x4 input required");
  return determinant(bezout_matrix_cubics(rows2x4.row(0), rows2x4.row(1)));
}

namespace {

// ---- witness helpers ------------------------------------------------------

/// Entrywise radius bound for enclosure witnesses.
const Rational& enclosure_radius_target() {
  static const Rational r{Integer(1), pow10(40)};
  return r;
}

RatMatrix normalize_first_one(const RatMatrix& e) {
  const RatVec v = vec9_from_mat3(e);
  for (const auto& x : v)
    if (!x.is_zero()) return x.reciprocal() * e;
  return e;
}

void verify_exact_essential(const RatMatrix& Z, const RatMatrix& e) {
  if (!demazure_vanishes(e))
    throw std::logic_error("internal: witness not an essential matrix");
  const RatVec v = vec9_from_mat3(e);
  for (int i = 0; i < Z.rows(); ++i)
    if (!dot(Z.row(i), v).is_zero())
      throw std::logic_error("internal: witness violates a data row");
  if (e.is_zero()) throw std::logic_error("internal: zero witness");
}

WitnessMatrix exact_witness_checked(const RatMatrix& Z, const RatMatrix& e) {
  const RatMatrix n = normalize_first_one(e);
  verify_exact_essential(Z, n);
  return WitnessMatrix::exact_matrix(n);
}

/// Enclosure witness for E(s) = mat3(s*u + v), s the root of q isolated by
/// iv. The interval is refined until the entrywise radius is within target.
WitnessMatrix enclosure_on_line(const RatVec& u, const RatVec& v,
                                const UPoly& q, RootInterval iv) {
  if (iv.exact())
    throw std::logic_error("internal: exact root fed to enclosure path");
  Rational umax;
  for (const auto& e : u)
    if (e.abs() > umax) umax = e.abs();
  if (umax.is_zero()) throw std::logic_error("internal: zero direction");
  const Rational width = Rational(2) * enclosure_radius_target() / umax;
  iv = refine_root(q, iv, width);
  const Rational mid = iv.mid();
  RatVec w(9);
  for (size_t k = 0; k < 9; ++k) w[k] = mid * u[k] + v[k];
  WitnessMatrix out;
  out.value = mat3_from_vec9(w);
  out.radius = iv.width() / Rational(2) * umax;
  return out;
}

/// Exact root if some isolated root of q is rational, otherwise an
/// enclosure on the first real root. q must have at least one real root.
WitnessMatrix witness_from_cubic_root(const RatMatrix& Z, const RatVec& u,
                                      const RatVec& v, const UPoly& q) {
  const auto ivs = isolate_real_roots(q);
  if (ivs.empty()) throw std::logic_error("internal: no real root to isolate");
  for (const auto& iv : ivs) {
    if (iv.exact()) {
      RatVec w(9);
      for (size_t k = 0; k < 9; ++k) w[k] = iv.lo * u[k] + v[k];
      return exact_witness_checked(Z, mat3_from_vec9(w));
    }
    if (const auto root = reconstruct_rational_root(q, iv)) {
      RatVec w(9);
      for (size_t k = 0; k < 9; ++k) w[k] = *root * u[k] + v[k];
      return exact_witness_checked(Z, mat3_from_vec9(w));
    }
  }
  return enclosure_on_line(u, v, q, ivs.front());
}

RatMatrix pencil_point(const RatVec& u, const RatVec& v, const Rational& l,
                       const Rational& m) {
  RatVec w(9);
  for (size_t k = 0; k < 9; ++k) w[k] = l * u[k] + m * v[k];
  return mat3_from_vec9(w);
}

UPoly dehomogenize_cubic(const RatVec& a) {
  // a[0] l^3 + a[1] l^2 m + a[2] l m^2 + a[3] m^3 at m = 1, low-to-high.
  return UPoly({a[3], a[2], a[1], a[0]});
}

}  // namespace

EssentialVerdict exists_essential_rank7(const RatMatrix& Z) {
  EssentialVerdict out;
  out.rank_z = rank(Z);
  if (out.rank_z != 7)
    throw std::invalid_argument("exists_essential_rank7: rank(Z) must be 7");
  const auto ker = kernel_basis(Z);
  const RatVec u = ker[0], v = ker[1];

  const RatMatrix r = build_R(u, v);
  const int rr = rank(r);
  out.trace = "rank7;rankR=" + std::to_string(rr);

  switch (rr) {
    case 0: {
      // Every pencil point is essential.
      out.complex_exists = out.real_exists = Tri::Yes;
      out.witness = exact_witness_checked(Z, mat3_from_vec9(u));
      return out;
    }
    case 1: {
      // One nonzero binary cubic; odd degree forces a real projective root.
      out.complex_exists = out.real_exists = Tri::Yes;
      int j = 0;
      while (is_zero_vec(r.row(j))) ++j;
      const RatVec a = r.row(j);
      if (a[0].is_zero()) {
        out.witness = exact_witness_checked(Z, mat3_from_vec9(u));  // (1 : 0)
      } else {
        out.witness = witness_from_cubic_root(Z, u, v, dehomogenize_cubic(a));
      }
      return out;
    }
    case 4:
      out.complex_exists = out.real_exists = Tri::No;
      return out;
    case 3: {
      // One cubic's worth of freedom: the kernel coefficient vector must be
      // a moment vector (l^3, l^2 m, l m^2, m^3) for a common root to exist.
      const auto kw = kernel_basis(r);
      const RatVec w = kw.front();
      RatMatrix hankel(2, 3);
      hankel.at(0, 0) = w[0]; hankel.at(0, 1) = w[1]; hankel.at(0, 2) = w[2];
      hankel.at(1, 0) = w[1]; hankel.at(1, 1) = w[2]; hankel.at(1, 2) = w[3];
      if (rank(hankel) <= 1) {
        out.trace += ";moment=yes";
        out.complex_exists = out.real_exists = Tri::Yes;
        const bool at_inf = w[0].is_zero();
        const RatMatrix e = at_inf ? pencil_point(u, v, Rational(0), Rational(1))
                                   : pencil_point(u, v, w[0], w[1]);
        out.witness = exact_witness_checked(Z, e);
      } else {
        out.trace += ";moment=no";
        out.complex_exists = out.real_exists = Tri::No;
      }
      return out;
    }
    case 2: {
      // Row space spanned by two cubics; common roots are their gcd's roots.
      int j1 = 0;
      while (is_zero_vec(r.row(j1))) ++j1;
      int j2 = j1 + 1;
      auto independent = [&](int j) {
        RatMatrix two(2, 4);
        for (int k = 0; k < 4; ++k) {
          two.at(0, k) = r.row(j1)[static_cast<size_t>(k)];
          two.at(1, k) = r.row(j)[static_cast<size_t>(k)];
        }
        return rank(two) == 2;
      };
      while (!independent(j2)) ++j2;
      const RatVec f = r.row(j1), g = r.row(j2);

      const int rb = rank(bezout_matrix_cubics(f, g));
      out.trace += ";bezout=" + std::to_string(rb);
      if (rb == 3) {
        out.complex_exists = out.real_exists = Tri::No;
        return out;
      }
      const UPoly fa = dehomogenize_cubic(f), ga = dehomogenize_cubic(g);
      const UPoly h = gcd(fa, ga);
      out.complex_exists = Tri::Yes;
      if (rb == 2) {
        // Degree-1 shared factor: the unique common root is rational (it may
        // sit at infinity when both leading coefficients vanish).
        out.real_exists = Tri::Yes;
        if (h.degree() == 1) {
          const Rational l0 = -h.coeff(0) / h.coeff(1);
          out.witness = exact_witness_checked(Z, pencil_point(u, v, l0, Rational(1)));
        } else {
          if (!f[0].is_zero() || !g[0].is_zero())
            throw std::logic_error("internal: shared root neither affine nor at infinity");
          out.witness = exact_witness_checked(Z, mat3_from_vec9(u));
        }
        return out;
      }
      // rb == 1: degree-2 shared factor.
      if (h.degree() == 2) {
        const Rational disc =
            h.coeff(1) * h.coeff(1) - Rational(4) * h.coeff(2) * h.coeff(0);
        if (disc.sign() < 0) {
          out.trace += ";disc<0";
          out.real_exists = Tri::No;
          return out;
        }
        out.real_exists = Tri::Yes;
        Rational sq;
        if (is_perfect_square(disc, &sq)) {
          out.trace += disc.is_zero() ? ";disc=0" : ";disc=square";
          const Rational l0 = (-h.coeff(1) + sq) / (Rational(2) * h.coeff(2));
          out.witness = exact_witness_checked(Z, pencil_point(u, v, l0, Rational(1)));
        } else {
          out.trace += ";disc>0";
          const auto ivs = isolate_real_roots(h);
          out.witness = enclosure_on_line(u, v, h, ivs.front());
        }
        return out;
      }
      // Shared factor involves the root at infinity (m divides it).
      out.real_exists = Tri::Yes;
      if (h.degree() == 1) {
        const Rational l0 = -h.coeff(0) / h.coeff(1);
        out.witness = exact_witness_checked(Z, pencil_point(u, v, l0, Rational(1)));
      } else {
        out.witness = exact_witness_checked(Z, mat3_from_vec9(u));
      }
      return out;
    }
    default:
      throw std::logic_error("internal: impossible rank of R");
  }
}

// ---- ranks <= 3: constructive witness --------------------------------------

namespace {

RatVec homogenize_x(const Correspondence& c) { return {c.x1, c.x2, Rational(1)}; }
RatVec homogenize_y(const Correspondence& c) { return {c.y1, c.y2, Rational(1)}; }

/// Reads a correspondence back out of a data-matrix row; throws when the row
/// does not have the Kronecker structure (y1 x1, y1 x2, y1, ..., x1, x2, 1).
Correspondence decode_row(const RatVec& r) {
  if (r.size() != 9 || !(r[8] == Rational(1)))
    throw std::invalid_argument("data row must end in 1");
  const Correspondence c{r[6], r[7], r[2], r[5]};
  const RatVec x = homogenize_x(c), y = homogenize_y(c);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!(r[static_cast<size_t>(3 * i + j)] == y[static_cast<size_t>(i)] * x[static_cast<size_t>(j)]))
        throw std::invalid_argument("data row is not a correspondence row");
  return c;
}

/// Elements of Q(sqrt(d)), d > 0 rational. When d happens to be a perfect
/// square the arithmetic still treats sqrt(d) formally (as the positive
/// root), and values can be collapsed to plain rationals at the end.
class QuadField {
 public:
  struct El {
    Rational a, b;  // a + b*sqrt(d)
  };

  explicit QuadField(const Rational& d) : d_(d) {
    if (d.sign() <= 0)
      throw std::invalid_argument("QuadField: positive d required");
    square_ = is_perfect_square(d_, &root_);
  }

  El from(const Rational& a) const { return {a, Rational(0)}; }
  El sqrt_d() const { return {Rational(0), Rational(1)}; }
  El add(const El& u, const El& v) const { return {u.a + v.a, u.b + v.b}; }
  El sub(const El& u, const El& v) const { return {u.a - v.a, u.b - v.b}; }
  El neg(const El& u) const { return {-u.a, -u.b}; }
  El mul(const El& u, const El& v) const {
    return {u.a * v.a + d_ * u.b * v.b, u.a * v.b + u.b * v.a};
  }
  El div(const El& u, const El& v) const {
    if (is_zero(v)) throw std::domain_error("QuadField: division by zero");
    if (square_) {
      // sqrt(d) is rational: convert, divide, convert back.
      const Rational q = to_rational(u) / to_rational(v);
      return {q, Rational(0)};
    }
    const Rational n = v.a * v.a - d_ * v.b * v.b;  // nonzero: sqrt(d) irrational
    return {(u.a * v.a - d_ * u.b * v.b) / n, (u.b * v.a - u.a * v.b) / n};
  }
  bool is_zero(const El& u) const {
    if (square_) return (u.a + u.b * root_).is_zero();
    return u.a.is_zero() && u.b.is_zero();
  }
  bool rational_values() const { return square_; }
  Rational to_rational(const El& u) const {
    if (!square_) throw std::logic_error("QuadField: irrational value");
    return u.a + u.b * root_;
  }
  const Rational& d() const { return d_; }

 private:
  Rational d_;
  bool square_ = false;
  Rational root_;
};

using QEl = QuadField::El;
using QVec = std::array<QEl, 3>;
using QMat = std::array<std::array<QEl, 3>, 3>;

QVec qvec_from(const RatVec& v) {
  return {QEl{v[0], Rational(0)}, QEl{v[1], Rational(0)}, QEl{v[2], Rational(0)}};
}

QVec qcross(const QuadField& F, const QVec& a, const QVec& b) {
  return {F.sub(F.mul(a[1], b[2]), F.mul(a[2], b[1])),
          F.sub(F.mul(a[2], b[0]), F.mul(a[0], b[2])),
          F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0]))};
}

QEl qdot(const QuadField& F, const QVec& a, const QVec& b) {
  QEl s = F.from(Rational(0));
  for (int i = 0; i < 3; ++i)
    s = F.add(s, F.mul(a[static_cast<size_t>(i)], b[static_cast<size_t>(i)]));
  return s;
}

QMat qmul(const QuadField& F, const QMat& a, const QMat& b) {
  QMat c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      QEl s = F.from(Rational(0));
      for (int k = 0; k < 3; ++k)
        s = F.add(s, F.mul(a[static_cast<size_t>(i)][static_cast<size_t>(k)],
                           b[static_cast<size_t>(k)][static_cast<size_t>(j)]));
      c[static_cast<size_t>(i)][static_cast<size_t>(j)] = s;
    }
  return c;
}

QMat qtranspose(const QMat& a) {
  QMat t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t[static_cast<size_t>(i)][static_cast<size_t>(j)] = a[static_cast<size_t>(j)][static_cast<size_t>(i)];
  return t;
}

QMat qmatvec_outer_reflection(const QuadField& F, const QVec& w) {
  // I - 2 w w^T / (w.w)
  const QEl n = qdot(F, w, w);
  QMat h;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      QEl v = F.neg(F.div(
          F.mul(F.from(Rational(2)), F.mul(w[static_cast<size_t>(i)], w[static_cast<size_t>(j)])), n));
      if (i == j) v = F.add(v, F.from(Rational(1)));
      h[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
    }
  return h;
}

QMat qskew(const QuadField& F, const QVec& t) {
  const QEl z = F.from(Rational(0));
  QMat m{{{z, F.neg(t[2]), t[1]}, {t[2], z, F.neg(t[0])}, {F.neg(t[1]), t[0], z}}};
  return m;
}

/// The ten defining values (nine cubic entries and the determinant) over the
/// quadratic extension; zero exactly when the matrix is essential.
std::array<QEl, 10> qdemazure(const QuadField& F, const QMat& e) {
  const QMat s = qmul(F, e, qtranspose(e));
  const QEl tr = F.add(F.add(s[0][0], s[1][1]), s[2][2]);
  const QMat se = qmul(F, s, e);
  std::array<QEl, 10> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out[static_cast<size_t>(3 * i + j)] =
          F.sub(F.mul(F.from(Rational(2)), se[static_cast<size_t>(i)][static_cast<size_t>(j)]),
                F.mul(tr, e[static_cast<size_t>(i)][static_cast<size_t>(j)]));
  // det by cofactor expansion along the first row
  auto m2 = [&](int r1, int c1, int r2, int c2) {
    return F.sub(F.mul(e[static_cast<size_t>(r1)][static_cast<size_t>(c1)],
                       e[static_cast<size_t>(r2)][static_cast<size_t>(c2)]),
                 F.mul(e[static_cast<size_t>(r1)][static_cast<size_t>(c2)],
                       e[static_cast<size_t>(r2)][static_cast<size_t>(c1)]));
  };
  out[9] = F.add(F.sub(F.mul(e[0][0], m2(1, 1, 2, 2)), F.mul(e[0][1], m2(1, 0, 2, 2))),
                 F.mul(e[0][2], m2(1, 0, 2, 1)));
  return out;
}

/// A nonzero rational vector orthogonal to v (v must be nonzero).
RatVec rational_orthogonal(const RatVec& v) {
  for (int k = 0; k < 3; ++k) {
    RatVec e(3, Rational(0));
    e[static_cast<size_t>(k)] = Rational(1);
    const RatVec c = cross3(v, e);
    if (!is_zero_vec(c)) return c;
  }
  throw std::invalid_argument("rational_orthogonal: zero vector");
}

/// A nonzero element of the kernel of the (possibly zero) stacked rows, used
/// as a translation direction: t must be orthogonal to every given vector.
RatVec translation_for(const std::vector<RatVec>& normals) {
  RatMatrix m(static_cast<int>(normals.size()), 3);
  for (size_t i = 0; i < normals.size(); ++i)
    for (int j = 0; j < 3; ++j) m.at(static_cast<int>(i), j) = normals[i][static_cast<size_t>(j)];
  const auto ker = kernel_basis(m);
  if (ker.empty())
    throw std::logic_error("internal: no translation direction exists");
  return ker.front();
}

WitnessMatrix identity_rotation_witness(const RatMatrix& Z,
                                        const std::vector<Correspondence>& sel) {
  std::vector<RatVec> normals;
  for (const auto& c : sel)
    normals.push_back(cross3(homogenize_x(c), homogenize_y(c)));
  if (normals.empty()) normals.push_back(RatVec(3, Rational(0)));
  const RatVec t = translation_for(normals);
  return exact_witness_checked(Z, skew3(t));
}

/// Three independent correspondence rows whose identity-rotation system has
/// no kernel: rotate the pivot's first-image point onto the line of its
/// second-image point with two reflections, making that row's constraint
/// vacuous; any translation orthogonal to the two remaining constraint
/// vectors then works. All arithmetic lives in Q(sqrt(d)) with
/// d = |x|^2 |y|^2; when d is a perfect square the result is rational.
WitnessMatrix aligned_rotation_witness(const RatMatrix& Z,
                                       const std::vector<Correspondence>& sel,
                                       int pivot) {
  const RatVec x = homogenize_x(sel[static_cast<size_t>(pivot)]);
  const RatVec y = homogenize_y(sel[static_cast<size_t>(pivot)]);
  const Rational nx = dot(x, x), ny = dot(y, y);
  const QuadField F(nx * ny);

  // c = |x| / |y| = sqrt(d) / |y|^2, so that |c y| = |x|.
  const QEl c = F.div(F.sqrt_d(), F.from(ny));
  QVec w1;
  for (int i = 0; i < 3; ++i)
    w1[static_cast<size_t>(i)] =
        F.sub(F.from(x[static_cast<size_t>(i)]), F.mul(c, F.from(y[static_cast<size_t>(i)])));
  if (F.is_zero(w1[0]) && F.is_zero(w1[1]) && F.is_zero(w1[2]))
    throw std::logic_error("internal: pivot points already aligned");
  const QMat h1 = qmatvec_outer_reflection(F, w1);  // swaps x and c y
  const QMat h2 = qmatvec_outer_reflection(F, qvec_from(rational_orthogonal(y)));
  const QMat r = qmul(F, h2, h1);  // rotation with R x = c y

  std::vector<QVec> normals;
  for (int j = 0; j < static_cast<int>(sel.size()); ++j) {
    if (j == pivot) continue;
    const QVec xj = qvec_from(homogenize_x(sel[static_cast<size_t>(j)]));
    const QVec yj = qvec_from(homogenize_y(sel[static_cast<size_t>(j)]));
    QVec rx;
    for (int i = 0; i < 3; ++i)
      rx[static_cast<size_t>(i)] = qdot(F, {r[static_cast<size_t>(i)][0], r[static_cast<size_t>(i)][1],
                                            r[static_cast<size_t>(i)][2]},
                                        xj);
    normals.push_back(qcross(F, rx, yj));
  }

  auto qvec_zero = [&](const QVec& v) {
    return F.is_zero(v[0]) && F.is_zero(v[1]) && F.is_zero(v[2]);
  };
  QVec t{};
  t = qcross(F, normals[0], normals[1]);
  if (qvec_zero(t)) {
    const QVec* nz = nullptr;
    if (!qvec_zero(normals[0])) nz = &normals[0];
    else if (!qvec_zero(normals[1])) nz = &normals[1];
    if (nz == nullptr) {
      t = qvec_from({Rational(0), Rational(0), Rational(1)});
    } else {
      for (int k = 0; k < 3 && qvec_zero(t); ++k)
        t = qcross(F, *nz, qvec_from({Rational(k == 0 ? 1 : 0),
                                      Rational(k == 1 ? 1 : 0),
                                      Rational(k == 2 ? 1 : 0)}));
    }
  }

  const QMat e = qmul(F, qskew(F, t), r);

  // Symbolic verification in Q(sqrt(d)): all ten defining values vanish and
  // every data row annihilates vec9(E).
  for (const auto& val : qdemazure(F, e))
    if (!F.is_zero(val)) throw std::logic_error("internal: quad witness not essential");
  for (int i = 0; i < Z.rows(); ++i) {
    const RatVec row = Z.row(i);
    QEl s = F.from(Rational(0));
    for (int k = 0; k < 9; ++k)
      s = F.add(s, F.mul(F.from(row[static_cast<size_t>(k)]),
                         e[static_cast<size_t>(k / 3)][static_cast<size_t>(k % 3)]));
    if (!F.is_zero(s)) throw std::logic_error("internal: quad witness violates a data row");
  }

  if (F.rational_values()) {
    RatMatrix em(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        em.at(i, j) = F.to_rational(e[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    return exact_witness_checked(Z, em);
  }

  // Enclosure: entry = a + b*sqrt(d); bound sqrt(d) in an interval narrow
  // enough that every entry moves by at most the radius target.
  Rational bmax;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Rational ab = e[static_cast<size_t>(i)][static_cast<size_t>(j)].b.abs();
      if (ab > bmax) bmax = ab;
    }
  if (bmax.is_zero()) {
    RatMatrix em(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) em.at(i, j) = e[static_cast<size_t>(i)][static_cast<size_t>(j)].a;
    return exact_witness_checked(Z, em);
  }
  const UPoly sq({-F.d(), Rational(0), Rational(1)});
  auto ivs = isolate_real_roots(sq);
  RootInterval iv = ivs.back();  // the positive root
  iv = refine_root(sq, iv, Rational(2) * enclosure_radius_target() / bmax);
  const Rational mid = iv.mid();
  WitnessMatrix out;
  out.value = RatMatrix(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const QEl& q = e[static_cast<size_t>(i)][static_cast<size_t>(j)];
      out.value.at(i, j) = q.a + q.b * mid;
    }
  out.radius = iv.width() / Rational(2) * bmax;
  return out;
}

WitnessMatrix low_rank_witness(const RatMatrix& Z) {
  // Rows that span the row space; every other epipolar value is a linear
  // combination of theirs, so a matrix fitting these fits all of Z.
  std::vector<RatVec> rows;
  std::vector<Correspondence> sel;
  for (int i = 0; i < Z.rows(); ++i) {
    std::vector<RatVec> cand = rows;
    cand.push_back(Z.row(i));
    if (rank(RatMatrix::from_rows(cand)) > static_cast<int>(rows.size())) {
      rows = std::move(cand);
      sel.push_back(decode_row(Z.row(i)));
    }
  }

  if (sel.size() <= 2) return identity_rotation_witness(Z, sel);

  // Three rows: identity rotation works iff the constraint vectors are
  // linearly dependent.
  std::vector<RatVec> normals;
  for (const auto& c : sel)
    normals.push_back(cross3(homogenize_x(c), homogenize_y(c)));
  if (determinant(RatMatrix::from_rows(normals)).is_zero())
    return identity_rotation_witness(Z, sel);

  // Otherwise align one correspondence by a rational rotation when possible
  // (perfect-square d), falling back to the quadratic extension.
  int pivot = 0;
  for (int i = 0; i < 3; ++i) {
    const RatVec x = homogenize_x(sel[static_cast<size_t>(i)]);
    const RatVec y = homogenize_y(sel[static_cast<size_t>(i)]);
    Rational root;
    if (is_perfect_square(dot(x, x) * dot(y, y), &root)) {
      pivot = i;
      break;
    }
  }
  return aligned_rotation_witness(Z, sel, pivot);
}

}  // namespace

EssentialVerdict exists_essential(const RatMatrix& Z) {
  if (Z.cols() != 9)
    throw std::invalid_argument("exists_essential: 9 columns required");
  EssentialVerdict out;
  out.rank_z = rank(Z);
  switch (out.rank_z) {
    case 9:
      out.complex_exists = out.real_exists = Tri::No;
      out.trace = "rank9";
      return out;
    case 8: {
      const auto ker = kernel_basis(Z);
      const RatMatrix e = mat3_from_vec9(ker.front());
      if (demazure_vanishes(e)) {
        out.complex_exists = out.real_exists = Tri::Yes;
        out.trace = "rank8;cubicsVanish";
        out.witness = exact_witness_checked(Z, e);
      } else {
        out.complex_exists = out.real_exists = Tri::No;
        out.trace = "rank8;cubicsNonzero";
      }
      return out;
    }
    case 7:
      return exists_essential_rank7(Z);
    case 6: {
      const auto ker = kernel_basis(Z);
      Pencil p;
      // Primitive scaling of each basis vector only reparametrises the
      // pencil, but keeps the cubics' coefficients small integers.
      for (const auto& w : ker)
        p.mats.push_back(mat3_from_vec9(scale_to_primitive(w)));
      const bool empty = projective_empty(demazure_system(p));
      out.complex_exists = empty ? Tri::No : Tri::Yes;
      out.real_exists = empty ? Tri::No : Tri::Unknown;
      out.trace = empty ? "rank6;complexEmpty" : "rank6;complexNonempty";
      return out;
    }
    case 5: {
      // A 3-plane of directions always meets the 5-dimensional projective
      // variety cut out by the cubics, so a complex solution exists.
      out.complex_exists = Tri::Yes;
      const auto ker = kernel_basis(Z);
      Pencil p;
      for (const auto& w : ker)
        p.mats.push_back(mat3_from_vec9(scale_to_primitive(w)));
      const RealCountResult rc = count_real_rank5(p);
      if (!rc.exact) {
        out.real_exists = Tri::Unknown;
        out.trace = "rank5;nonShapePosition";
      } else {
        out.real_exists = rc.count > 0 ? Tri::Yes : Tri::No;
        out.trace = "rank5;realRoots=" + std::to_string(rc.count);
      }
      return out;
    }
    case 4:
      out.complex_exists = Tri::Yes;   // same dimension count as rank 5
      out.real_exists = Tri::Unknown;  // open in general
      out.trace = "rank4";
      return out;
    default: {
      out.complex_exists = out.real_exists = Tri::Yes;
      out.trace = "rank" + std::to_string(out.rank_z);
      out.witness = low_rank_witness(Z);
      return out;
    }
  }
}

}  // namespace epi
