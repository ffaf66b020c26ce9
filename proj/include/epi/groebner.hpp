#pragma once

#include <optional>
#include <vector>

#include "epi/mpoly.hpp"
#include "epi/upoly.hpp"

namespace epi {

enum class MonomialOrder { DegRevLex, Lex };

/// Reduced Groebner basis of the ideal generated by `gens` (monic, fully
/// inter-reduced, sorted by increasing leading monomial). Buchberger with the
/// coprime-leading-term and chain pruning criteria; intended for the small
/// systems this library produces (<= 4 variables).
std::vector<MPoly> buchberger(const std::vector<MPoly>& gens,
                              MonomialOrder ord);

/// Remainder of f on division by `basis` under `ord` (every term reduced).
MPoly normal_form(const MPoly& f, const std::vector<MPoly>& basis,
                  MonomialOrder ord);

/// Emptiness of the projective zero set of a homogeneous ideal over the
/// complex numbers: empty iff the leading-term ideal of a degrevlex Groebner
/// basis contains a pure power of every variable (equivalently, the affine
/// cone is the origin alone).
bool projective_empty(const std::vector<MPoly>& homogeneous_gens);

/// Converts a polynomial in at most one effective variable to dense
/// univariate form (throws when a later variable actually occurs).
UPoly to_upoly(const MPoly& p);

struct RealCountResult {
  int count = 0;    // distinct real projective solutions
  bool exact = false;  // false: shape-lemma preconditions failed (nongeneric)
};

/// Counts the distinct real projective zeros of the ten essential-variety
/// cubics restricted to a 4-dimensional kernel pencil (rank(Z) == 5 case).
/// Charts w_1 = 1; w_1 = 0, w_2 = 1; ... partition projective 3-space, so the
/// per-chart counts add up without double counting. On each chart a lex
/// Groebner basis is computed; when it is zero-dimensional in shape-lemma
/// form the real roots of its univariate generator are Sturm-counted.
/// Any chart that is not in shape form (and not empty) yields exact = false.
RealCountResult count_real_rank5(const Pencil& kernel4);

}  // namespace epi
