#pragma once

#include <initializer_list>
#include <vector>

#include "epi/rational.hpp"

namespace epi {

using RatVec = std::vector<Rational>;

/// Dense matrix of exact rationals, row-major. Dimensions are fixed at
/// construction. All arithmetic is exact; there is no floating point anywhere
/// in this module.
class RatMatrix {
public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {}

  static RatMatrix identity(int n);
  static RatMatrix from_rows(std::initializer_list<std::initializer_list<Rational>> rows);
  static RatMatrix from_rows(const std::vector<RatVec>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& at(int r, int c) { return e_[static_cast<size_t>(r) * cols_ + c]; }
  const Rational& at(int r, int c) const {
    return e_[static_cast<size_t>(r) * cols_ + c];
  }

  RatVec row(int r) const;
  RatMatrix transpose() const;
  bool is_zero() const;

  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator*(const Rational& s, const RatMatrix& a);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b);

private:
  int rows_, cols_;
  std::vector<Rational> e_;
};

/// Exact rank by fraction-free Bareiss elimination. Each row is first scaled
/// to integers (LCM of denominators), which leaves the rank unchanged; the
/// elimination then stays in Integer arithmetic with exact divisions only.
int rank(const RatMatrix& a);

/// Exact determinant (square input). Bareiss on denominator-cleared rows,
/// with the row scalings divided back out.
Rational determinant(const RatMatrix& a);

/// Reduced row echelon form over the rationals. The RREF of a matrix is
/// unique, so everything derived from it below is deterministic.
RatMatrix rref(const RatMatrix& a);

/// Basis of the right null space, in the reduced-echelon convention: one
/// vector per free column f (ascending), with entry 1 at f and minus the RREF
/// coefficients at the pivot positions. Empty when the matrix has full column
/// rank.
std::vector<RatVec> kernel_basis(const RatMatrix& a);

/// Signed maximal-minor vector of a k x (k+1) matrix:
///   a_i = (-1)^(i-1) det(A with column i deleted),  i = 1..k+1.
/// A * a = 0 always (Laplace expansion of a det with a repeated row); a is
/// nonzero exactly when rank(A) = k, in which case it spans the kernel.
RatVec cramer_vector(const RatMatrix& a);

/// Unsigned 2x2 minor of a 3x3 matrix: delete row i and column j (1-indexed)
/// and take the determinant of what is left. No cofactor sign is applied;
/// every use in this library only cares whether the value vanishes.
Rational minor2x2(const RatMatrix& a, int i, int j);

// --- small-vector helpers -------------------------------------------------

Rational dot(const RatVec& a, const RatVec& b);
RatVec cross3(const RatVec& a, const RatVec& b);
bool is_zero_vec(const RatVec& v);

/// 3x3 matrix from a 9-vector, row-major, and back. This fixes the
/// vectorisation convention used by the data matrix: row i of the data matrix
/// dotted with vec9(F) equals y_i^T F x_i.
RatMatrix mat3_from_vec9(const RatVec& v);
RatVec vec9_from_mat3(const RatMatrix& m);

/// Cross-product matrix [t]x with [t]x v = t x v.
RatMatrix skew3(const RatVec& t);

/// Scales a nonzero rational vector by the unique positive rational that
/// makes its entries coprime integers (sign pattern preserved). Zero vectors
/// pass through unchanged.
RatVec scale_to_primitive(const RatVec& v);

// --- correspondences and the data matrix ----------------------------------

/// One two-view point correspondence, image points in affine (inhomogeneous)
/// coordinates. Homogenisation appends a third coordinate 1.
struct Correspondence {
  Rational x1, x2;  // first image
  Rational y1, y2;  // second image
};

struct DataMatrices {
  RatMatrix Z;  // m x 9, row i = kron(y_i, x_i) on homogenised points
  RatMatrix X;  // m x 3, homogenised first-image points
  RatMatrix Y;  // m x 3, homogenised second-image points
};

/// Builds Z, X, Y from the correspondences. Row i of Z is
///   (y1 x1, y1 x2, y1, y2 x1, y2 x2, y2, x1, x2, 1)
/// so that Z * vec9(F) stacks the epipolar values y_i^T F x_i.
DataMatrices build_data_matrices(const std::vector<Correspondence>& corrs);

}  // namespace epi
