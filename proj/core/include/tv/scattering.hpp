#pragma once

// Walls, scattering diagrams, path-ordered products around singular points,
// consistency certificates, and order-by-order completion.
//
// Conventions (pinned by the requirement that the pentagon diagram checks
// out as consistent):
//   * the normal of a wall with primitive direction m is normal_of(m), the
//     90-degree rotation, so that {m, n} is positively oriented;
//   * loops are counterclockwise circles; a crossing counts +1 when the loop
//     passes from the n-negative to the n-positive side;
//   * the path-ordered product applies factors in crossing order, i.e. the
//     first wall crossed acts first (innermost).

#include <optional>
#include <vector>

#include "tv/geometry.hpp"
#include "tv/vertexgroup.hpp"

namespace tv {

enum class WallKind { line, ray };
enum class WallAlign { outgoing, incoming }; // monomial direction = +m / -m

class Wall {
 public:
  /// Validates: m primitive; fn = 1 + terms of positive filtration order,
  /// every exponent a positive multiple of the monomial direction.
  Wall(LatticeVec m, RatPoint base, WallKind kind, WallAlign align,
       TruncatedSeries fn);

  LatticeVec direction() const { return m_; }
  const RatPoint& base() const { return base_; }
  WallKind kind() const { return kind_; }
  WallAlign align() const { return align_; }
  const TruncatedSeries& fn() const { return fn_; }
  DualVec normal() const { return n_; }
  int order() const { return fn_.order(); }

  LatticeVec monomial_dir() const {
    return align_ == WallAlign::outgoing ? m_ : -m_;
  }

  SupportGeom support() const {
    return SupportGeom{kind_ == WallKind::line ? SupportKind::line : SupportKind::ray,
                       base_, m_};
  }

  /// Replaces the wall function (used by completion when merging rays).
  Wall with_fn(TruncatedSeries fn) const;

  /// Wall-crossing automorphism z^{m'} -> z^{m'} fn^{sign <m', n>}.
  Automorphism crossing(int sign) const;

  /// log(fn) (x) n.
  LieElement log() const;

  friend bool operator==(const Wall&, const Wall&);

 private:
  LatticeVec m_;
  RatPoint base_;
  WallKind kind_;
  WallAlign align_;
  TruncatedSeries fn_;
  DualVec n_;
};

struct ScatteringDiagram {
  int order;
  std::vector<Wall> walls;
  std::vector<RatPoint> excluded;

  bool is_excluded(const RatPoint& p) const;
};

/// Distinct wall supports (plot + membership queries).
std::vector<SupportGeom> supports(const ScatteringDiagram& d);

bool on_support(const ScatteringDiagram& d, const RatPoint& p);

/// Ray endpoints plus all pairwise transversal intersection points, sorted.
std::vector<RatPoint> singular_points(const ScatteringDiagram& d);

struct Crossing {
  std::size_t wall_index;
  LatticeVec halfline; // direction of the crossed half-line at the point
  int sign;            // +1: n-negative to n-positive side
};

/// Walls crossed by a small counterclockwise loop around p, ordered by the
/// angle past the reference direction. p must be on the support of each
/// reported wall; requires p singular only by convention of use.
std::vector<Crossing> crossing_sequence(const ScatteringDiagram& d, const RatPoint& p,
                                        LatticeVec ref = {1, 0});

/// Composition of crossing factors in loop order (first crossed innermost).
Automorphism path_ordered_product(const ScatteringDiagram& d, const RatPoint& p,
                                  LatticeVec ref = {1, 0});

struct ConsistencyFailure {
  RatPoint point;
  LieElement log; // log of the offending loop product
  int first_order;
};

struct ConsistencyCertificate {
  bool consistent = true;
  int points_checked = 0;
  std::vector<ConsistencyFailure> failures;
};

/// Checks the loop product at every singular point not excluded.
ConsistencyCertificate is_consistent(const ScatteringDiagram& d);

/// Kontsevich-Soibelman completion: returns the input diagram with outgoing
/// rays appended until every non-excluded singular point passes, order by
/// order in the filtration. Input walls are never modified; the appended
/// rays are exactly out.walls[d.walls.size()..].
ScatteringDiagram complete(const ScatteringDiagram& d);

// -- interchange format ------------------------------------------------------

/// Deterministic text form; walls are sorted canonically.
std::string diagram_str(const ScatteringDiagram& d);

/// Parses diagram_str output (and hand-written files). Error messages carry
/// 1-based line numbers.
ScatteringDiagram diagram_parse(std::string_view text);

/// Equality as wall sets with same-support walls merged (used by oracles).
bool diagram_equal(const ScatteringDiagram& a, const ScatteringDiagram& b);

/// Merged canonical walls: same (kind, m, align, support) walls multiplied.
std::vector<Wall> merged_walls(const ScatteringDiagram& d);

} // namespace tv
