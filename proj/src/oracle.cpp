#include "epi/oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace epi {

namespace {

// Draw bounds. Small coordinates keep the data-matrix entries (products of
// two image coordinates) and everything computed from them — kernel bases,
// pencil cubics, Groebner coefficients — at manageable bit sizes.
constexpr long kWorldBound = 9;
constexpr long kSkewBound = 3;
constexpr long kTranslationBound = 5;
constexpr long kCameraBound = 5;
constexpr long kImageBound = 12;

RatVec matvec(const RatMatrix& a, const RatVec& v) {
  if (a.cols() != static_cast<int>(v.size()))
    throw std::invalid_argument("matvec: size mismatch");
  RatVec r(static_cast<size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i) {
    Rational s;
    for (int j = 0; j < a.cols(); ++j)
      s += a.at(i, j) * v[static_cast<size_t>(j)];
    r[static_cast<size_t>(i)] = s;
  }
  return r;
}

RatVec rand_vec3(RationalRng& rng, long bound) {
  return {rng.rational(bound), rng.rational(bound), rng.rational(bound)};
}

/// Cayley transform (I - S)(I + S)^{-1} of the skew matrix of s: an exact
/// rational rotation (I + S is invertible for every real skew S).
RatMatrix cayley_rotation(const RatVec& s) {
  const RatMatrix S = skew3(s);
  const RatMatrix I = RatMatrix::identity(3);
  return (I - S) * inverse(I + S);
}

/// Assembles a 3x4 camera [A | b].
RatMatrix camera(const RatMatrix& a, const RatVec& b) {
  RatMatrix p(3, 4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) p.at(i, j) = a.at(i, j);
    p.at(i, 3) = b[static_cast<size_t>(i)];
  }
  return p;
}

bool same_vec(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

/// Affine world point (a, b, c, 1).
RatVec rand_world_point(RationalRng& rng) {
  return {rng.rational(kWorldBound), rng.rational(kWorldBound),
          rng.rational(kWorldBound), Rational(1)};
}

Correspondence corr_from(const std::pair<Rational, Rational>& x,
                         const std::pair<Rational, Rational>& y) {
  return Correspondence{x.first, x.second, y.first, y.second};
}

}  // namespace

long RationalRng::int_in(long lo, long hi) {
  if (lo > hi) throw std::invalid_argument("int_in: empty range");
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(eng_() % span);
}

Rational RationalRng::rational(long bound) {
  const long num = int_in(-bound, bound);
  const long den = int_in(1, bound);
  return Rational(num, den);
}

Rational RationalRng::nonzero_rational(long bound) {
  for (;;) {
    Rational q = rational(bound);
    if (!q.is_zero()) return q;
  }
}

RatMatrix inverse(const RatMatrix& a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("inverse: square input required");
  RatMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, n + i) = Rational(1);
  }
  const RatMatrix r = rref(aug);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(r.at(i, j) == (i == j ? Rational(1) : Rational(0))))
        throw std::domain_error("inverse: singular matrix");
  RatMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = r.at(i, n + j);
  return inv;
}

RatVec camera_center(const RatMatrix& P) {
  if (P.rows() != 3 || P.cols() != 4)
    throw std::invalid_argument("camera_center: 3x4 input required");
  const auto ker = kernel_basis(P);
  if (ker.size() != 1)
    throw std::invalid_argument("camera_center: camera must have rank 3");
  RatVec c = ker.front();
  if (!c[3].is_zero()) {
    const Rational inv = c[3].reciprocal();
    for (auto& q : c) q *= inv;
    return c;
  }
  return scale_to_primitive(c);
}

RatMatrix fundamental_from_cameras(const RatMatrix& P1, const RatMatrix& P2) {
  const RatVec c1 = camera_center(P1);
  const RatVec e2 = matvec(P2, c1);
  if (is_zero_vec(e2))
    throw std::invalid_argument(
        "fundamental_from_cameras: coincident camera centers");
  // Moore-Penrose right inverse of the full-row-rank P1.
  const RatMatrix pinv = P1.transpose() * inverse(P1 * P1.transpose());
  return skew3(e2) * P2 * pinv;
}

std::pair<Rational, Rational> project_point(const RatMatrix& P,
                                            const RatVec& w) {
  const RatVec img = matvec(P, w);
  if (img[2].is_zero())
    throw std::domain_error("project_point: image on the plane at infinity");
  const Rational inv = img[2].reciprocal();
  return {img[0] * inv, img[1] * inv};
}

std::vector<Correspondence> project(const Scene& s) {
  std::vector<Correspondence> corrs;
  corrs.reserve(s.world.size());
  for (const auto& w : s.world)
    corrs.push_back(corr_from(project_point(s.P1, w), project_point(s.P2, w)));
  return corrs;
}

Scene generate_scene(int m, bool calibrated, uint64_t seed) {
  if (m < 1) throw std::invalid_argument("generate_scene: m must be positive");
  RationalRng rng(seed);

  for (;;) {  // fresh cameras until the scene passes every post-check
    Scene s;
    s.calibrated = calibrated;
    if (calibrated) {
      RatMatrix I4(3, 4);
      for (int i = 0; i < 3; ++i) I4.at(i, i) = Rational(1);
      s.P1 = I4;
      const RatMatrix R = cayley_rotation(rand_vec3(rng, kSkewBound));
      RatVec t = rand_vec3(rng, kTranslationBound);
      while (is_zero_vec(t)) t = rand_vec3(rng, kTranslationBound);
      s.P2 = camera(R, t);
    } else {
      auto rand_camera = [&rng]() {
        for (;;) {
          RatMatrix a(3, 3);
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a.at(i, j) = rng.rational(kCameraBound);
          if (!determinant(a).is_zero())
            return camera(a, rand_vec3(rng, kCameraBound));
        }
      };
      s.P1 = rand_camera();
      do {
        s.P2 = rand_camera();
      } while (same_vec(camera_center(s.P1), camera_center(s.P2)));
    }
    const RatVec c1 = camera_center(s.P1), c2 = camera_center(s.P2);

    s.world.clear();
    s.corrs.clear();
    for (int i = 0; i < m; ++i) {
      for (;;) {
        const RatVec w = rand_world_point(rng);
        if (same_vec(w, c1) || same_vec(w, c2)) continue;
        const RatVec i1 = matvec(s.P1, w), i2 = matvec(s.P2, w);
        if (i1[2].is_zero() || i2[2].is_zero()) continue;
        s.world.push_back(w);
        break;
      }
    }
    s.corrs = project(s);

    // Generic scenes have data-matrix rank exactly min(m, 8); anything less
    // (accidentally structured points) is redrawn so callers can rely on it.
    const auto dm = build_data_matrices(s.corrs);
    if (rank(dm.Z) != std::min(m, 8)) continue;

    s.F = fundamental_from_cameras(s.P1, s.P2);
    if (rank(s.F) != 2) continue;
    if (calibrated) s.E = s.F;  // [P2 c1]x P2 P1^+ collapses to [t]x R here
    return s;
  }
}

namespace {

/// m distinct image points on the rational line p + s*d, at distinct random
/// rational parameters.
std::vector<std::pair<Rational, Rational>> points_on_line(RationalRng& rng,
                                                          int count) {
  const Rational px = rng.rational(kImageBound), py = rng.rational(kImageBound);
  Rational dx = rng.rational(kImageBound), dy = rng.rational(kImageBound);
  while (dx.is_zero() && dy.is_zero()) {
    dx = rng.rational(kImageBound);
    dy = rng.rational(kImageBound);
  }
  std::set<Rational> used;
  std::vector<std::pair<Rational, Rational>> pts;
  while (static_cast<int>(pts.size()) < count) {
    const Rational t = rng.rational(kImageBound);
    if (!used.insert(t).second) continue;
    pts.emplace_back(px + t * dx, py + t * dy);
  }
  return pts;
}

std::pair<Rational, Rational> rand_image_point(RationalRng& rng) {
  return {rng.rational(kImageBound), rng.rational(kImageBound)};
}

std::vector<Correspondence> degenerate_collinear_split(
    const DegenerateConfig& cfg, int m, RationalRng& rng) {
  std::vector<bool> in_tau(static_cast<size_t>(m), false);
  for (int i : cfg.tau) {
    if (i < 0 || i >= m)
      throw std::invalid_argument("generate_degenerate: tau index out of range");
    in_tau[static_cast<size_t>(i)] = true;
  }
  const int ntau = static_cast<int>(std::count(in_tau.begin(), in_tau.end(), true));
  const auto xs_line = points_on_line(rng, ntau);
  const auto ys_line = points_on_line(rng, m - ntau);
  std::vector<Correspondence> out(static_cast<size_t>(m));
  size_t xi = 0, yi = 0;
  for (int i = 0; i < m; ++i) {
    const auto x = in_tau[static_cast<size_t>(i)] ? xs_line[xi++]
                                                  : rand_image_point(rng);
    const auto y = in_tau[static_cast<size_t>(i)] ? rand_image_point(rng)
                                                  : ys_line[yi++];
    out[static_cast<size_t>(i)] = corr_from(x, y);
  }
  return out;
}

std::vector<Correspondence> degenerate_repeated_point(int m, RationalRng& rng) {
  const auto x = rand_image_point(rng);
  std::set<std::pair<Rational, Rational>> used;
  std::vector<Correspondence> out;
  while (static_cast<int>(out.size()) < m) {
    const auto y = rand_image_point(rng);
    if (!used.insert(y).second) continue;
    out.push_back(corr_from(x, y));
  }
  return out;
}

std::vector<Correspondence> degenerate_homography(int m, RationalRng& rng) {
  if (m < 2)
    throw std::invalid_argument(
        "generate_degenerate: homography kind needs m >= 2");
  RatMatrix h(3, 3);
  do {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h.at(i, j) = rng.rational(kImageBound);
  } while (determinant(h).is_zero());
  std::vector<Correspondence> out;
  while (static_cast<int>(out.size()) < m - 2) {
    const auto x = rand_image_point(rng);
    const RatVec hx = matvec(h, {x.first, x.second, Rational(1)});
    if (hx[2].is_zero()) continue;
    const Rational inv = hx[2].reciprocal();
    out.push_back(corr_from(x, {hx[0] * inv, hx[1] * inv}));
  }
  while (static_cast<int>(out.size()) < m)
    out.push_back(corr_from(rand_image_point(rng), rand_image_point(rng)));
  return out;
}

std::vector<Correspondence> degenerate_rank_target(const DegenerateConfig& cfg,
                                                   int m, RationalRng& rng) {
  const int r = cfg.target_rank;
  if (r < 1 || r > 8 || r > m)
    throw std::invalid_argument(
        "generate_degenerate: target rank must be in 1..min(m, 8)");
  // r generic pairs give r independent data-matrix rows; the remaining pairs
  // repeat them verbatim, which provably cannot raise the rank.
  std::vector<Correspondence> base;
  for (;;) {
    base.clear();
    for (int i = 0; i < r; ++i)
      base.push_back(corr_from(rand_image_point(rng), rand_image_point(rng)));
    if (rank(build_data_matrices(base).Z) == r) break;
  }
  std::vector<Correspondence> out = base;
  for (int i = r; i < m; ++i) out.push_back(base[static_cast<size_t>(i % r)]);
  return out;
}

}  // namespace

std::vector<Correspondence> generate_degenerate(const DegenerateConfig& cfg,
                                                int m, uint64_t seed) {
  if (m < 1)
    throw std::invalid_argument("generate_degenerate: m must be positive");
  RationalRng rng(seed);
  switch (cfg.kind) {
    case DegenerateKind::CollinearSplit:
      return degenerate_collinear_split(cfg, m, rng);
    case DegenerateKind::RepeatedPoint:
      return degenerate_repeated_point(m, rng);
    case DegenerateKind::HomographyRelated:
      return degenerate_homography(m, rng);
    case DegenerateKind::RankDeficientTarget:
      return degenerate_rank_target(cfg, m, rng);
  }
  throw std::invalid_argument("generate_degenerate: unknown kind");
}

}  // namespace epi
