#include "tv/geometry.hpp"

namespace tv {

std::string point_str(const RatPoint& p) {
  return "(" + rat_str(p.x) + "," + rat_str(p.y) + ")";
}

Rational cross_from(const RatPoint& p, const RatPoint& q, LatticeVec d) {
  return (q.x - p.x) * Rational(static_cast<long>(d.b)) -
         (q.y - p.y) * Rational(static_cast<long>(d.a));
}

bool SupportGeom::contains(const RatPoint& p) const {
  if (cross_from(base, p, dir) != 0) return false;
  if (kind == SupportKind::line) return true;
  return sgn(param(p)) >= 0;
}

Rational SupportGeom::param(const RatPoint& p) const {
  if (dir.a != 0) return (p.x - base.x) / Rational(static_cast<long>(dir.a));
  return (p.y - base.y) / Rational(static_cast<long>(dir.b));
}

std::optional<RatPoint> intersect(const SupportGeom& s1, const SupportGeom& s2) {
  std::int64_t det = cross(s1.dir, s2.dir);
  if (det == 0) return std::nullopt;
  // base1 + s dir1 = base2 + u dir2
  Rational wx = s2.base.x - s1.base.x;
  Rational wy = s2.base.y - s1.base.y;
  Rational dr(static_cast<long>(det));
  Rational s = (wx * Rational(static_cast<long>(s2.dir.b)) -
                wy * Rational(static_cast<long>(s2.dir.a))) / dr;
  Rational u = (wx * Rational(static_cast<long>(s1.dir.b)) -
                wy * Rational(static_cast<long>(s1.dir.a))) / dr;
  if (s1.kind == SupportKind::ray && sgn(s) < 0) return std::nullopt;
  if (s2.kind == SupportKind::ray && sgn(u) < 0) return std::nullopt;
  return advance(s1.base, s1.dir, s);
}

std::optional<std::pair<RatPoint, Rational>> segment_crossing(
    const RatPoint& a, const RatPoint& b, const SupportGeom& s) {
  // a + tau (b - a) on the support line; exact in rationals.
  Rational dx = b.x - a.x, dy = b.y - a.y;
  Rational db(static_cast<long>(s.dir.b)), da(static_cast<long>(s.dir.a));
  Rational denom = dx * db - dy * da;
  if (denom == 0) return std::nullopt;
  Rational num = (s.base.x - a.x) * db - (s.base.y - a.y) * da;
  Rational tau = num / denom;
  if (sgn(tau) <= 0 || tau >= 1) return std::nullopt;
  RatPoint p{a.x + tau * dx, a.y + tau * dy};
  if (s.kind == SupportKind::ray && sgn(s.param(p)) < 0) return std::nullopt;
  return std::make_pair(p, tau);
}

namespace {

std::int64_t dot(LatticeVec u, LatticeVec v) { return u.a * v.a + u.b * v.b; }

// Angular sector of v relative to ref: 0 for (0, pi), 1 for exactly pi,
// 2 for (pi, 2pi), 3 for exactly 2pi (same direction as ref).
int sector(LatticeVec v, LatticeVec ref) {
  std::int64_t cr = cross(ref, v);
  if (cr > 0) return 0;
  if (cr < 0) return 2;
  return dot(ref, v) > 0 ? 3 : 1;
}

} // namespace

bool angle_less(LatticeVec u, LatticeVec v, LatticeVec ref) {
  int su = sector(u, ref), sv = sector(v, ref);
  if (su != sv) return su < sv;
  if (su == 1 || su == 3) return false; // equal angles
  return cross(u, v) > 0;
}

bool angle_equal(LatticeVec u, LatticeVec v) {
  return cross(u, v) == 0 && dot(u, v) > 0;
}

} // namespace tv
