#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "epi/exactla.hpp"

namespace epi {

/// Deterministic source of small exact rationals. Built on mt19937_64 (whose
/// output stream is fixed by the standard) with explicit modulo mapping, so a
/// seed reproduces the same values on every platform.
class RationalRng {
public:
  explicit RationalRng(uint64_t seed) : eng_(seed) {}

  /// Uniform-ish integer in [lo, hi] (modulo mapping; bias is irrelevant
  /// here, determinism is what matters).
  long int_in(long lo, long hi);

  /// Rational with numerator in [-bound, bound] and denominator in
  /// [1, bound]; bound defaults to the generator cap of 1000.
  Rational rational(long bound = 1000);

  /// Nonzero variant.
  Rational nonzero_rational(long bound = 1000);

private:
  std::mt19937_64 eng_;
};

/// A synthetic two-view scene with exact ground truth: cameras, world
/// points, exact projections, the exact fundamental matrix, and the exact
/// essential matrix when the scene is calibrated.
struct Scene {
  RatMatrix P1, P2;            // 3x4 cameras with rank-3 left blocks
  std::vector<RatVec> world;   // homogeneous 4-vectors, last coordinate 1
  std::vector<Correspondence> corrs;
  RatMatrix F;                 // [P2 c1]x P2 P1^+, rank 2, y^T F x = 0 exactly
  std::optional<RatMatrix> E;  // [t]x R for calibrated scenes
  bool calibrated = false;
};

/// Generates m correspondences from a random scene. Calibrated scenes use
/// P1 = [I | 0] and P2 = [R | t] with R a Cayley-transform rotation, so the
/// fundamental matrix of the pair *is* an essential matrix. Points that
/// would project to infinity (or collapse the data-matrix rank below
/// min(m, 8)) are redrawn from the same stream, so generation is still a
/// pure function of (m, calibrated, seed).
Scene generate_scene(int m, bool calibrated, uint64_t seed);

/// Exact dehomogenised image of a homogeneous world point under a camera.
/// Throws std::domain_error when the projected third coordinate vanishes
/// (point on the camera's principal plane).
std::pair<Rational, Rational> project_point(const RatMatrix& P,
                                            const RatVec& w);

/// Exact projections of every world point through both cameras; equals
/// Scene::corrs for any scene produced by generate_scene.
std::vector<Correspondence> project(const Scene& s);

enum class DegenerateKind {
  CollinearSplit,       // x_i collinear on tau, y_i collinear off tau
  RepeatedPoint,        // every correspondence shares the same first-image point
  HomographyRelated,    // all but two pairs related by a fixed homography
  RankDeficientTarget,  // rank(Z) forced to an exact target by row repetition
};

struct DegenerateConfig {
  DegenerateKind kind = DegenerateKind::CollinearSplit;
  std::vector<int> tau;  // CollinearSplit: 0-based indices for the x side
  int target_rank = 4;   // RankDeficientTarget: wanted rank(Z), 1..8
};

/// Structured degenerate instances. Throws std::invalid_argument on
/// infeasible configurations (e.g. target rank above min(m, 8)).
std::vector<Correspondence> generate_degenerate(const DegenerateConfig& cfg,
                                                int m, uint64_t seed);

/// Exact inverse of a square rational matrix (throws on singular input).
RatMatrix inverse(const RatMatrix& a);

/// Camera centre: the kernel point of a 3x4 camera with rank-3 left block,
/// normalised to last coordinate 1 when finite.
RatVec camera_center(const RatMatrix& P);

/// Exact fundamental matrix of a camera pair.
RatMatrix fundamental_from_cameras(const RatMatrix& P1, const RatMatrix& P2);

}  // namespace epi
