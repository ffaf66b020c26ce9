#pragma once

#include "epi/exactla.hpp"
#include "epi/rational.hpp"

namespace epi {

/// A 3x3 witness matrix, either exact or a certified enclosure.
///
/// radius == 0: `value` itself is the witness and the defining identities
/// hold exactly at it.
///
/// radius > 0: there is a true witness W (typically with algebraic entries)
/// with |W_ij - value_ij| <= radius for every entry. The enclosure is
/// certified symbolically by the code that built it — the witness is a point
/// on an exactly-known parametric family at an isolated, Sturm-counted root
/// of an exact polynomial — so the radius is a bound, not an estimate.
struct WitnessMatrix {
  RatMatrix value;
  Rational radius;

  bool exact() const { return radius.is_zero(); }

  static WitnessMatrix exact_matrix(RatMatrix m) {
    return WitnessMatrix{std::move(m), Rational(0)};
  }
};

}  // namespace epi
