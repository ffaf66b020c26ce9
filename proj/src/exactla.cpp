#include "epi/exactla.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

namespace epi {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
  return m;
}

RatMatrix RatMatrix::from_rows(
    std::initializer_list<std::initializer_list<Rational>> rows) {
  std::vector<RatVec> rs;
  for (const auto& r : rows) rs.emplace_back(r);
  return from_rows(rs);
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVec>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  RatMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw std::invalid_argument("RatMatrix::from_rows: ragged rows");
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

RatVec RatMatrix::row(int r) const {
  RatVec v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = at(r, j);
  return v;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

bool RatMatrix::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
  RatMatrix r = a;
  for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
  return r;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
  RatMatrix r = a;
  for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= b.e_[i];
  return r;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  assert(a.cols_ == b.rows_);
  RatMatrix r(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const Rational& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) r.at(i, j) += aik * b.at(k, j);
    }
  return r;
}

RatMatrix operator*(const Rational& s, const RatMatrix& a) {
  RatMatrix r = a;
  for (auto& x : r.e_) x *= s;
  return r;
}

bool operator==(const RatMatrix& a, const RatMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
}

namespace {

// Clears denominators row by row; returns the integer matrix and the product
// of the (positive) scale factors applied.
std::vector<std::vector<Integer>> clear_rows(const RatMatrix& a,
                                             Integer* scale_product) {
  std::vector<std::vector<Integer>> m(a.rows(),
                                      std::vector<Integer>(a.cols()));
  Integer total = 1;
  for (int i = 0; i < a.rows(); ++i) {
    Integer l = 1;
    for (int j = 0; j < a.cols(); ++j) l = lcm(l, Integer(a.at(i, j).den()));
    for (int j = 0; j < a.cols(); ++j) {
      const Rational& q = a.at(i, j);
      m[i][j] = q.num() * (l / q.den());
    }
    total *= l;
  }
  if (scale_product) *scale_product = total;
  return m;
}

// Fraction-free Bareiss elimination on an integer matrix, in place. Returns
// the rank; when `det` is non-null the matrix must be square and *det is set
// to its determinant. All interior divisions are exact (Sylvester identity).
int bareiss(std::vector<std::vector<Integer>>& m, Integer* det) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
  Integer prev = 1;
  int sign = 1;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (sgn(m[i][c]) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r) { std::swap(m[piv], m[r]); sign = -sign; }
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        Integer t = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  if (det) {
    assert(rows == cols);
    if (r < rows)
      *det = 0;
    else
      *det = sign > 0 ? prev : Integer(-prev);
  }
  return r;
}

}  // namespace

int rank(const RatMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  auto m = clear_rows(a, nullptr);
  return bareiss(m, nullptr);
}

Rational determinant(const RatMatrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("determinant: matrix not square");
  if (a.rows() == 0) return Rational(1);
  Integer scale;
  auto m = clear_rows(a, &scale);
  Integer d;
  bareiss(m, &d);
  return Rational(d, scale);
}

RatMatrix rref(const RatMatrix& a) {
  RatMatrix m = a;
  const int rows = m.rows(), cols = m.cols();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (!m.at(i, c).is_zero()) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
    const Rational inv = m.at(r, c).reciprocal();
    for (int j = c; j < cols; ++j) m.at(r, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m.at(i, c).is_zero()) continue;
      const Rational f = m.at(i, c);
      for (int j = c; j < cols; ++j) m.at(i, j) -= f * m.at(r, j);
    }
    ++r;
  }
  return m;
}

std::vector<RatVec> kernel_basis(const RatMatrix& a) {
  const int cols = a.cols();
  const RatMatrix r = rref(a);
  // Pivot column of each echelon row, in order.
  std::vector<int> pivot_col;
  for (int i = 0; i < r.rows(); ++i) {
    int c = pivot_col.empty() ? 0 : pivot_col.back() + 1;
    for (; c < cols; ++c)
      if (!r.at(i, c).is_zero()) break;
    if (c == cols) break;  // zero row; all later rows are zero too
    pivot_col.push_back(c);
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;

  std::vector<RatVec> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(cols, Rational(0));
    v[f] = Rational(1);
    for (size_t k = 0; k < pivot_col.size(); ++k)
      v[pivot_col[k]] = -r.at(static_cast<int>(k), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

RatVec cramer_vector(const RatMatrix& a) {
  const int k = a.rows();
  if (a.cols() != k + 1)
    throw std::invalid_argument("cramer_vector: need a k x (k+1) matrix");
  RatVec out(k + 1);
  for (int drop = 0; drop < k + 1; ++drop) {
    RatMatrix sub(k, k);
    for (int i = 0; i < k; ++i) {
      int jj = 0;
      for (int j = 0; j < k + 1; ++j) {
        if (j == drop) continue;
        sub.at(i, jj++) = a.at(i, j);
      }
    }
    const Rational d = determinant(sub);
    out[drop] = (drop % 2 == 0) ? d : -d;  // (-1)^(i-1) with i = drop+1
  }
  return out;
}

Rational minor2x2(const RatMatrix& a, int i, int j) {
  assert(a.rows() == 3 && a.cols() == 3);
  assert(1 <= i && i <= 3 && 1 <= j && j <= 3);
  int r[2], c[2], n = 0;
  for (int t = 0; t < 3; ++t)
    if (t != i - 1) r[n++] = t;
  n = 0;
  for (int t = 0; t < 3; ++t)
    if (t != j - 1) c[n++] = t;
  return a.at(r[0], c[0]) * a.at(r[1], c[1]) -
         a.at(r[0], c[1]) * a.at(r[1], c[0]);
}

Rational dot(const RatVec& a, const RatVec& b) {
  assert(a.size() == b.size());
  Rational s;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

RatVec cross3(const RatVec& a, const RatVec& b) {
  assert(a.size() == 3 && b.size() == 3);
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

bool is_zero_vec(const RatVec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

RatMatrix mat3_from_vec9(const RatVec& v) {
  assert(v.size() == 9);
  RatMatrix m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.at(i, j) = v[3 * i + j];
  return m;
}

RatVec vec9_from_mat3(const RatMatrix& m) {
  assert(m.rows() == 3 && m.cols() == 3);
  RatVec v(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v[3 * i + j] = m.at(i, j);
  return v;
}

RatMatrix skew3(const RatVec& t) {
  assert(t.size() == 3);
  RatMatrix m(3, 3);
  m.at(0, 1) = -t[2]; m.at(0, 2) = t[1];
  m.at(1, 0) = t[2];  m.at(1, 2) = -t[0];
  m.at(2, 0) = -t[1]; m.at(2, 1) = t[0];
  return m;
}

RatVec scale_to_primitive(const RatVec& v) {
  Integer den_lcm = 1;
  for (const auto& q : v) den_lcm = lcm(den_lcm, Integer(q.den()));
  Integer num_gcd = 0;
  for (const auto& q : v) num_gcd = gcd(num_gcd, Integer(q.num() * (den_lcm / q.den())));
  if (sgn(num_gcd) == 0) return v;  // zero vector
  RatVec out(v.size());
  const Rational s{den_lcm, num_gcd};
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] * s;
  return out;
}

DataMatrices build_data_matrices(const std::vector<Correspondence>& corrs) {
  const int m = static_cast<int>(corrs.size());
  DataMatrices d{RatMatrix(m, 9), RatMatrix(m, 3), RatMatrix(m, 3)};
  const Rational one(1);
  for (int i = 0; i < m; ++i) {
    const Correspondence& c = corrs[i];
    const Rational x[3] = {c.x1, c.x2, one};
    const Rational y[3] = {c.y1, c.y2, one};
    for (int a = 0; a < 3; ++a) {
      d.X.at(i, a) = x[a];
      d.Y.at(i, a) = y[a];
      for (int b = 0; b < 3; ++b) d.Z.at(i, 3 * a + b) = y[a] * x[b];
    }
  }
  return d;
}

}  // namespace epi
