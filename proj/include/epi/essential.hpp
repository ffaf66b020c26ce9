#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epi/exactla.hpp"
#include "epi/mpoly.hpp"
#include "epi/witness.hpp"

namespace epi {

/// Three-valued answer for the essential-matrix questions. Unknown is an
/// honest verdict: for some kernel dimensions the real question is open.
enum class Tri { Yes, No, Unknown };
const char* to_string(Tri t);

struct EssentialVerdict {
  Tri complex_exists = Tri::Unknown;
  Tri real_exists = Tri::Unknown;
  int rank_z = 0;
  /// Branch record for diagnostics, e.g. "rank7;rankR=2;bezout=1;disc<0".
  std::string trace;
  /// Optional: a real essential matrix compatible with the data. Exact
  /// witnesses satisfy Z*vec9(E) = 0 and all ten defining values of
  /// `demazure` vanish exactly; enclosures certify such a matrix within the
  /// stated radius.
  std::optional<WitnessMatrix> witness;
};

/// The ten cubic values cutting out the (closure of the) essential variety:
/// entries of 2*E*E^T*E - trace(E*E^T)*E in row-major order, then det(E).
/// A real nonzero 3x3 matrix is an essential matrix iff all ten vanish.
RatVec demazure(const RatMatrix& E);

/// True iff all ten values of demazure(E) are zero.
bool demazure_vanishes(const RatMatrix& E);

/// The same ten cubics evaluated on a symbolic pencil point M(w): ten
/// homogeneous cubic polynomials in the pencil parameters.
std::vector<MPoly> demazure_system(const Pencil& p);

/// Coefficient matrix of the ten cubics restricted to the kernel line
/// {lambda*u + mu*v}: row j holds (r_j1..r_j4) with
///   p_j(lambda*u + mu*v) = r_j1 l^3 + r_j2 l^2 m + r_j3 l m^2 + r_j4 m^3.
/// Extracted exactly by evaluating at (1,0), (0,1), (1,1), (1,-1).
/// u, v must be linearly independent 9-vectors.
RatMatrix build_R(const RatVec& u, const RatVec& v);

/// Symmetric 3x3 Bezout matrix of two binary cubics given by coefficient
/// rows (a1..a4), (b1..b4). Its determinant is (up to a fixed sign) the
/// resultant, vanishing iff the cubics share a projective root; its rank is
/// 3 minus the degree of their homogeneous gcd.
RatMatrix bezout_matrix_cubics(const RatVec& a, const RatVec& b);

/// det of the Bezout matrix of rows 0 and 1 of a 2x4 matrix: the Chow form
/// of the twisted cubic evaluated at that coefficient pair.
Rational chow_twisted_cubic(const RatMatrix& rows2x4);

/// Full decision for rank(Z) == 7 (two-dimensional kernel).
EssentialVerdict exists_essential_rank7(const RatMatrix& Z);

/// Dispatch on rank(Z): complete complex/real decision for ranks <= 3, 7, 8,
/// 9; complex decision plus real-root counting for rank 5; complex decision
/// with real unknown-if-nonempty for rank 6; complex yes with real unknown
/// for rank 4 (open question).
EssentialVerdict exists_essential(const RatMatrix& Z);

}  // namespace epi
