#pragma once

// Hand-picked exact instances with known behaviour, shared by the unit and
// acceptance suites. Each fixture names the structural feature it exercises.

#include <vector>

#include "epi/exactla.hpp"

namespace fixtures {

using epi::Correspondence;
using epi::RatMatrix;
using epi::Rational;

inline Rational q(long n, long d = 1) { return Rational(n, d); }

inline std::vector<Correspondence> zip(
    const std::vector<std::vector<Rational>>& xs,
    const std::vector<std::vector<Rational>>& ys) {
  std::vector<Correspondence> out;
  for (size_t i = 0; i < xs.size(); ++i)
    out.push_back({xs[i][0], xs[i][1], ys[i][0], ys[i][1]});
  return out;
}

// Seven correspondences whose 2-dimensional data-matrix kernel is spanned by
// two rank-one matrices (both x- and y-points are collinear families), so no
// fundamental matrix exists even though the kernel is far from trivial.
inline std::vector<Correspondence> seven_point_rank_one_kernel() {
  return zip({{q(10), q(4)},
              {q(-7), q(0)},
              {q(-4), q(4)},
              {q(-7), q(1)},
              {q(0), q(-1)},
              {q(1), q(-8)},
              {q(1), q(-4)}},
             {{q(-3), q(5)},
              {q(5), q(-2)},
              {q(8), q(-9)},
              {q(11), q(-16)},
              {q(14), q(-23)},
              {q(17), q(-30)},
              {q(20), q(-37)}});
}

// The two rank-one kernel matrices of the instance above.
inline RatMatrix rank_one_kernel_A1() {
  return RatMatrix::from_rows(
      {{q(7), q(0), q(-70)}, {q(3), q(0), q(-30)}, {q(-29), q(0), q(290)}});
}
inline RatMatrix rank_one_kernel_A2() {
  return RatMatrix::from_rows(
      {{q(0), q(7), q(-28)}, {q(0), q(3), q(-12)}, {q(0), q(-29), q(116)}});
}

// Seven correspondences with kernel basis {A1 rank one, A2 rank three} whose
// pencil determinant factors as 96*(u1 + 187*u2)*u2^2; the kernel point
// -187*A1 + A2 has rank two, so a fundamental matrix exists.
inline std::vector<Correspondence> seven_point_split_det() {
  return zip({{q(2), q(0)},
              {q(3), q(-2)},
              {q(4), q(-4)},
              {q(5), q(-6)},
              {q(6), q(-8)},
              {q(-3), q(-2)},
              {q(2), q(-2)}},
             {{q(-2), q(-3)},
              {q(-2), q(-1)},
              {q(-2), q(2)},
              {q(2), q(-1)},
              {q(2), q(0)},
              {q(6), q(-5)},
              {q(7), q(-6)}});
}

inline RatMatrix split_det_A1() {
  return RatMatrix::from_rows(
      {{q(2), q(1), q(-4)}, {q(2), q(1), q(-4)}, {q(-2), q(-1), q(4)}});
}
inline RatMatrix split_det_A2() {
  return RatMatrix::from_rows({{q(0), q(5), q(6)},
                               {q(-56), q(-30), q(88)},
                               {q(-272), q(-152), q(484)}});
}

// Seven correspondences whose kernel is {I, A2} with det(u1*I + u2*A2) =
// (u1 + 5*u2)^3; the unique rank-deficient kernel point A2 - 5*I has rank
// one, so no fundamental matrix exists.
inline std::vector<Correspondence> seven_point_cube_rank_one() {
  return zip({{q(0), q(1)},
              {q(0), q(-1)},
              {q(0), q(2)},
              {q(1), q(0)},
              {q(1), q(1)},
              {q(0), q(-2)},
              {q(1), q(3)}},
             {{q(-4), q(-1)},
              {q(-2), q(1)},
              {q(-7, 2), q(-1, 2)},
              {q(-1), q(2)},
              {q(-2), q(1)},
              {q(1), q(1, 2)},
              {q(0), q(-1, 3)}});
}

inline RatMatrix cube_rank_one_A2() {
  return RatMatrix::from_rows(
      {{q(0), q(1), q(2)}, {q(5), q(4), q(-2)}, {q(-15), q(3), q(11)}});
}

// Seven correspondences whose kernel is {I, A2} with det(u1*I + u2*A2) =
// u1^3; the rank-deficient locus is the full line through A2 (a nilpotent
// rank-two matrix), which is itself a fundamental matrix.
inline std::vector<Correspondence> seven_point_cube_rank_two() {
  return zip({{q(-1), q(0)},
              {q(-3), q(0)},
              {q(6), q(3)},
              {q(0), q(1)},
              {q(2), q(2)},
              {q(0), q(1, 2)},
              {q(1, 2), q(1)}},
             {{q(1), q(0)},
              {q(1, 3), q(0)},
              {q(1, 3), q(-1)},
              {q(1), q(-1)},
              {q(1, 2), q(-1)},
              {q(4), q(-2)},
              {q(2), q(-2)}});
}

inline RatMatrix cube_rank_two_A2() {
  return RatMatrix::from_rows(
      {{q(0), q(1), q(0)}, {q(0), q(0), q(1)}, {q(0), q(0), q(0)}});
}

// Five correspondences all of whose compatible essential matrices are
// complex: ten simple complex solutions, none real.
inline std::vector<Correspondence> five_point_all_complex() {
  return zip({{q(3), q(0)}, {q(9), q(1)}, {q(1), q(2)}, {q(8), q(8)}, {q(4), q(8)}},
             {{q(2), q(0)}, {q(5), q(4)}, {q(9), q(6)}, {q(2), q(5)}, {q(1), q(4)}});
}

// Projections of five rational world points through two calibrated cameras
// (a Cayley rotation and a rational translation), so a real essential matrix
// fitting all five pairs exists by construction. The restricted cubic system
// has six distinct real projective solutions.
inline std::vector<Correspondence> five_point_calibrated() {
  return zip({{q(1, 5), q(2, 5)},
              {q(-1, 4), q(1, 4)},
              {q(1, 3), q(-1, 6)},
              {q(0), q(3, 7)},
              {q(1, 3), q(1, 9)}},
             {{q(-17969, 24618), q(-2429, 4103)},
              {q(-54439, 30860), q(-12082, 7715)},
              {q(-26761, 79048), q(-23835, 19762)},
              {q(-95333, 82562), q(-26278, 41281)},
              {q(-13531, 26150), q(-49784, 65375)}});
}

}  // namespace fixtures
