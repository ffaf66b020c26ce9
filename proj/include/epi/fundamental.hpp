#pragma once

#include <optional>
#include <vector>

#include "epi/exactla.hpp"
#include "epi/mpoly.hpp"
#include "epi/witness.hpp"

namespace epi {

/// Which branch of the decision procedure settled the verdict.
enum class FundamentalReason {
  RankZ9,                        // kernel is trivial
  Rank8UniqueMatrix,             // 1-dim kernel: det/minor test at the Cramer point
  KernelAllRankOne,              // det == 0 and every pencil minor == 0
  DetIdenticallyZeroWithRank2,   // det == 0, some minor survives
  DetNotCube,                    // det != 0 and not the cube of a linear form
  CubeCaseMinorsNonzero,         // det a cube; restricted pencil reaches rank 2
  CubeCaseMinorsAllZero,         // det a cube; restricted pencil rank <= 1
  RankLE4,                       // optional shortcut: rank(Z) <= 4 always admits F
};
const char* to_string(FundamentalReason r);

struct FundamentalVerdict {
  bool exists = false;
  FundamentalReason reason = FundamentalReason::RankZ9;
  int rank_z = 0;
  /// Present exactly when exists is true. Exact witnesses satisfy
  /// Z*vec9(F) = 0 and rank(F) = 2 exactly; enclosures certify a real
  /// rank-2 kernel matrix inside the stated radius.
  std::optional<WitnessMatrix> witness;
};

struct FundamentalOptions {
  /// When set, rank(Z) <= 4 returns an immediate yes (reason RankLE4)
  /// instead of walking the determinant/minor branches. Off by default so
  /// the general path stays exercised; the verdicts agree either way.
  bool early_exit_rank4 = false;
};

/// Decides, exactly, whether a real fundamental matrix (rank-2, nonzero)
/// exists with y_i^T F x_i = 0 for all rows of the data matrix Z.
FundamentalVerdict exists_fundamental(const RatMatrix& Z,
                                      const FundamentalOptions& opts = {});

/// rank(Z) == 8 specialisation: the kernel is spanned by the Cramer point A;
/// F exists iff det(A) = 0 and some 2x2 minor of A is nonzero.
FundamentalVerdict rank8_check(const RatMatrix& Z);

/// A two-line certificate that the kernel of Z meets the rank-<=1 locus:
/// x_i lies on line v for every i in tau, and y_i lies on line u for every
/// other index. Then u v^T (and every nonzero kernel point of rank <= 1)
/// shows the kernel touches rank one.
struct CollinearityWitness {
  std::vector<int> tau;  // 0-based indices whose x-points sit on v
  RatVec v, u;
};

/// Decides whether some split tau makes {x_i : i in tau} and
/// {y_i : i not in tau} simultaneously collinear (equivalently: the kernel of
/// Z meets the rank-<=1 locus over the reals). Complete for every m via
/// candidate-line enumeration; the returned witness is always rational.
std::optional<CollinearityWitness> collinearity_partition(const RatMatrix& X,
                                                          const RatMatrix& Y);

}  // namespace epi
