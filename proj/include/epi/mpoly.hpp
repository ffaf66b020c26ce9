#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "epi/exactla.hpp"
#include "epi/rational.hpp"
#include "epi/upoly.hpp"

namespace epi {

/// Exponent vector of a monomial; size equals the variable count of the
/// polynomial it belongs to.
using ExpVec = std::vector<int>;

/// Sparse multivariate polynomial over the rationals. Terms live in an
/// ordered map keyed by exponent vector, so iteration order (and equality)
/// is canonical; zero coefficients are never stored.
class MPoly {
public:
  explicit MPoly(int num_vars = 0) : nv_(num_vars) {}

  static MPoly constant(int num_vars, const Rational& c);
  static MPoly variable(int num_vars, int i);
  /// Linear form coeffs[0]*u_0 + ... + coeffs[t-1]*u_{t-1}.
  static MPoly linear_form(const RatVec& coeffs);

  int num_vars() const { return nv_; }
  bool is_zero() const { return terms_.empty(); }
  int num_terms() const { return static_cast<int>(terms_.size()); }
  /// Total degree; -1 for the zero polynomial.
  int total_degree() const;
  bool is_homogeneous(int d) const;

  const std::map<ExpVec, Rational>& terms() const { return terms_; }
  Rational coeff(const ExpVec& e) const;
  void add_term(const ExpVec& e, const Rational& c);

  Rational eval(const RatVec& point) const;

  /// Sets some variables to constants and drops them; the surviving
  /// variables keep their relative order. assign.size() == num_vars();
  /// nullopt entries survive.
  MPoly specialize(const std::vector<std::optional<Rational>>& assign) const;

  friend MPoly operator+(const MPoly& a, const MPoly& b);
  friend MPoly operator-(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const Rational& s, const MPoly& a);
  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.nv_ == b.nv_ && a.terms_ == b.terms_;
  }

private:
  int nv_;
  std::map<ExpVec, Rational> terms_;
};

MPoly pow(const MPoly& p, int e);

/// p(base + s*dir) as a univariate polynomial in s.
UPoly restrict_to_line(const MPoly& p, const RatVec& base, const RatVec& dir);

/// A linear matrix pencil M(u) = u_0 A_0 + ... + u_{t-1} A_{t-1} of 3x3
/// matrices — in this library always a basis of the kernel of a data matrix,
/// reshaped. The A_i are required to be linearly independent by every caller
/// that constructs one from kernel_basis.
struct Pencil {
  std::vector<RatMatrix> mats;

  int dim() const { return static_cast<int>(mats.size()); }
  RatMatrix evaluate(const RatVec& u) const;
  /// Entry (i, j) of M(u) as a linear polynomial in u.
  MPoly entry(int i, int j) const;
};

/// det M(u): a homogeneous cubic in the pencil parameters (or zero).
MPoly pencil_det(const Pencil& p);

/// The nine unsigned 2x2 minors of M(u) (delete row i+1, column j+1), each a
/// homogeneous quadratic. M(u) has rank <= 1 at exactly the common zeros.
std::array<std::array<MPoly, 3>, 3> pencil_minors(const Pencil& p);

bool all_minors_zero(const std::array<std::array<MPoly, 3>, 3>& q);

/// Writes a homogeneous cubic as c*(b.u)^3 when possible. b is normalised so
/// its first nonzero coordinate is 1 (then c is the matching u_i^3
/// coefficient). Returns nullopt for the zero polynomial and for cubics that
/// are not cubes of linear forms; throws for inputs that are not homogeneous
/// of degree 3.
struct CubeForm {
  Rational c;
  RatVec b;
};
std::optional<CubeForm> as_cube_of_linear_form(const MPoly& p);

/// Restricts a pencil to the hyperplane b.u = 0: returns the pencil over the
/// kernel-basis coordinates of b-perp (dimension dim()-1; empty when
/// dim() == 1). Requires b nonzero of length dim().
Pencil restrict_to_hyperplane(const Pencil& p, const RatVec& b);

}  // namespace epi
