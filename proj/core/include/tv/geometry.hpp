#pragma once

// Exact rational plane geometry for wall supports: no epsilons anywhere.

#include <optional>
#include <string>

#include "tv/algebra.hpp"

namespace tv {

struct RatPoint {
  Rational x;
  Rational y;

  friend bool operator==(const RatPoint&, const RatPoint&) = default;
};

/// Lexicographic (x, y); used for deterministic point sets.
struct RatPointLess {
  bool operator()(const RatPoint& p, const RatPoint& q) const {
    int c = cmp(p.x, q.x);
    if (c != 0) return c < 0;
    return cmp(p.y, q.y) < 0;
  }
};

std::string point_str(const RatPoint& p);

inline RatPoint advance(const RatPoint& p, LatticeVec d, const Rational& s) {
  return RatPoint{p.x + s * Rational(static_cast<long>(d.a)),
                  p.y + s * Rational(static_cast<long>(d.b))};
}

/// cross(q - p, d): zero iff q lies on the line through p with direction d.
Rational cross_from(const RatPoint& p, const RatPoint& q, LatticeVec d);

enum class SupportKind { line, ray };

/// A wall support: full line base + R*dir, or closed ray base + R>=0*dir.
struct SupportGeom {
  SupportKind kind = SupportKind::line;
  RatPoint base;
  LatticeVec dir; // primitive

  bool contains(const RatPoint& p) const;

  /// Parameter s with p = base + s dir; requires p on the support line.
  Rational param(const RatPoint& p) const;
};

/// Transversal intersection point of two supports, honoring ray extents.
/// Parallel (including collinear) supports yield nothing.
std::optional<RatPoint> intersect(const SupportGeom& s1, const SupportGeom& s2);

/// Intersection of the open segment (a, b) with a support; nothing when
/// parallel. Returns the point and the segment parameter in (0, 1).
std::optional<std::pair<RatPoint, Rational>> segment_crossing(
    const RatPoint& a, const RatPoint& b, const SupportGeom& s);

/// Strict counterclockwise angular order on nonzero integer vectors, with
/// angles measured in (0, 2pi] starting just after the direction `ref`:
/// a vector parallel to ref with the same sign sorts last.
bool angle_less(LatticeVec u, LatticeVec v, LatticeVec ref);

/// Same angle: parallel with the same sign.
bool angle_equal(LatticeVec u, LatticeVec v);

} // namespace tv
