#include "tv/scattering.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace tv {

Wall::Wall(LatticeVec m, RatPoint base, WallKind kind, WallAlign align,
           TruncatedSeries fn)
    : m_(m), base_(std::move(base)), kind_(kind), align_(align), fn_(std::move(fn)) {
  auto [m0, g] = primitive_part(m_);
  if (g != 1) input_error("wall direction must be primitive");
  n_ = normal_of(m_);
  LatticeVec mdir = monomial_dir();
  for (const auto& [mono, c] : fn_.terms()) {
    if (mono.is_unit()) {
      if (c != 1) input_error("wall function must have constant term 1");
      continue;
    }
    if (mono.filtration() < 1)
      input_error("wall function term of filtration order 0: " + monomial_str(mono));
    if (mono.m.is_zero()) continue; // pure t/u term is fine, direction-free
    auto [d0, k] = primitive_part(mono.m);
    if (!(d0 == mdir))
      input_error("wall function exponent " + lattice_str(mono.m) +
                  " is not a positive multiple of the monomial direction " +
                  lattice_str(mdir));
  }
  if (fn_.coeff(Monomial{}) != 1)
    input_error("wall function must have constant term 1");
}

Wall Wall::with_fn(TruncatedSeries fn) const {
  return Wall(m_, base_, kind_, align_, std::move(fn));
}

Automorphism Wall::crossing(int sign) const {
  int order = fn_.order();
  auto image = [&](LatticeVec gen) {
    std::int64_t e = sign * pair(gen, n_);
    TruncatedSeries lead = TruncatedSeries::term(order, Monomial{gen, 0, 0}, 1);
    if (e == 0) return lead;
    return lead * fn_.pow(e);
  };
  return Automorphism(image({1, 0}), image({0, 1}));
}

LieElement Wall::log() const { return LieElement::from_series(fn_.log(), n_); }

bool operator==(const Wall& a, const Wall& b) {
  return a.m_ == b.m_ && a.base_ == b.base_ && a.kind_ == b.kind_ &&
         a.align_ == b.align_ && a.fn_ == b.fn_;
}

bool ScatteringDiagram::is_excluded(const RatPoint& p) const {
  for (const RatPoint& q : excluded)
    if (p == q) return true;
  return false;
}

std::vector<SupportGeom> supports(const ScatteringDiagram& d) {
  std::vector<SupportGeom> out;
  for (const Wall& w : d.walls) {
    SupportGeom s = w.support();
    bool dup = false;
    for (const SupportGeom& t : out) {
      if (t.kind != s.kind) continue;
      if (t.kind == SupportKind::ray) {
        dup = t.base == s.base && t.dir == s.dir;
      } else {
        dup = (cross(t.dir, s.dir) == 0) && t.contains(s.base);
      }
      if (dup) break;
    }
    if (!dup) out.push_back(s);
  }
  return out;
}

bool on_support(const ScatteringDiagram& d, const RatPoint& p) {
  for (const Wall& w : d.walls)
    if (w.support().contains(p)) return true;
  return false;
}

std::vector<RatPoint> singular_points(const ScatteringDiagram& d) {
  std::set<RatPoint, RatPointLess> pts;
  for (const Wall& w : d.walls)
    if (w.kind() == WallKind::ray) pts.insert(w.base());
  for (std::size_t i = 0; i < d.walls.size(); ++i) {
    for (std::size_t j = i + 1; j < d.walls.size(); ++j) {
      auto p = intersect(d.walls[i].support(), d.walls[j].support());
      if (p) pts.insert(*p);
    }
  }
  return {pts.begin(), pts.end()};
}

std::vector<Crossing> crossing_sequence(const ScatteringDiagram& d, const RatPoint& p,
                                        LatticeVec ref) {
  std::vector<Crossing> out;
  for (std::size_t i = 0; i < d.walls.size(); ++i) {
    const Wall& w = d.walls[i];
    SupportGeom s = w.support();
    if (!s.contains(p)) continue;
    std::vector<LatticeVec> halves;
    if (w.kind() == WallKind::line) {
      halves = {w.direction(), -w.direction()};
    } else if (p == w.base()) {
      halves = {w.direction()};
    } else {
      halves = {w.direction(), -w.direction()};
    }
    for (LatticeVec v : halves) {
      // Counterclockwise velocity at angle(v) is rot90(v); the crossing is
      // positive when it moves toward the n-positive side.
      std::int64_t side = -v.b * w.normal().c + v.a * w.normal().d;
      if (side == 0) internal_error("degenerate crossing sign");
      out.push_back(Crossing{i, v, side > 0 ? 1 : -1});
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const Crossing& a, const Crossing& b) {
    return angle_less(a.halfline, b.halfline, ref);
  });
  return out;
}

Automorphism path_ordered_product(const ScatteringDiagram& d, const RatPoint& p,
                                  LatticeVec ref) {
  Automorphism acc(d.order);
  for (const Crossing& c : crossing_sequence(d, p, ref))
    acc = compose(d.walls[c.wall_index].crossing(c.sign), acc);
  return acc;
}

ConsistencyCertificate is_consistent(const ScatteringDiagram& d) {
  ConsistencyCertificate cert;
  for (const RatPoint& p : singular_points(d)) {
    if (d.is_excluded(p)) continue;
    ++cert.points_checked;
    Automorphism theta = path_ordered_product(d, p);
    if (theta.is_identity()) continue;
    LieElement g = log_derivation(theta);
    cert.failures.push_back(ConsistencyFailure{p, g, g.min_filtration()});
  }
  cert.consistent = cert.failures.empty();
  return cert;
}

// ---------------------------------------------------------------------------
// Completion

namespace {

struct RayKey {
  RatPoint base;
  LatticeVec dir;

  bool operator<(const RayKey& o) const {
    RatPointLess less;
    if (less(base, o.base)) return true;
    if (less(o.base, base)) return false;
    return lattice_less(dir, o.dir);
  }
};

MarkerSet diagram_markers(const ScatteringDiagram& d) {
  MarkerSet all = 0;
  for (const Wall& w : d.walls)
    for (const auto& [mono, c] : w.fn().terms()) all |= mono.markers;
  return all;
}

} // namespace

ScatteringDiagram complete(const ScatteringDiagram& d0) {
  ScatteringDiagram d = d0;
  const int max_filt = (d.order - 1) + marker_count(diagram_markers(d0));
  // Appended rays are merged by (base, direction); initial walls are not
  // touched.
  std::map<RayKey, std::size_t> added;

  for (int k = 1; k <= max_filt; ++k) {
    // Residues are computed against the frozen diagram of this round: an
    // order-k correction ray never changes another point's order-k residue
    // (it is crossed twice there, or not at all).
    std::map<RayKey, TruncatedSeries> corrections;
    for (const RatPoint& p : singular_points(d)) {
      if (d.is_excluded(p)) continue;
      Automorphism theta = path_ordered_product(d, p);
      if (theta.is_identity()) continue;
      LieElement residue = log_derivation(theta).filtration_part(k);
      for (const auto& [mono, v] : residue.terms()) {
        if (pair(mono.m, v) != 0)
          internal_error("completion residue not perpendicular at " + point_str(p) +
                         ": " + monomial_str(mono));
        auto [m0, g] = primitive_part(mono.m);
        DualVec n0 = normal_of(m0);
        // v = s * n0; cancel by a ray whose log gains -s at this monomial.
        Rational s = n0.c != 0 ? v.c / Rational(static_cast<long>(n0.c))
                               : v.d / Rational(static_cast<long>(n0.d));
        RayKey key{p, m0};
        auto it = corrections.find(key);
        if (it == corrections.end())
          it = corrections.emplace(key, TruncatedSeries(d.order)).first;
        it->second.add_term(mono, -s);
      }
    }
    for (const auto& [key, flog] : corrections) {
      if (flog.is_zero()) continue;
      TruncatedSeries factor = flog.exp();
      auto it = added.find(key);
      if (it != added.end()) {
        Wall& w = d.walls[it->second];
        w = w.with_fn(w.fn() * factor);
      } else {
        d.walls.push_back(
            Wall(key.dir, key.base, WallKind::ray, WallAlign::outgoing, factor));
        added.emplace(key, d.walls.size() - 1);
      }
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Interchange format

namespace {

std::string wall_sort_key(const Wall& w) {
  std::ostringstream os;
  os << (w.kind() == WallKind::line ? "0" : "1") << '|' << w.direction().a << ','
     << w.direction().b << '|' << (w.align() == WallAlign::outgoing ? "0" : "1") << '|'
     << rat_str(w.base().x) << ',' << rat_str(w.base().y) << '|' << w.fn().str();
  return os.str();
}

} // namespace

std::vector<Wall> merged_walls(const ScatteringDiagram& d) {
  std::vector<Wall> out;
  for (const Wall& w : d.walls) {
    bool merged = false;
    for (Wall& v : out) {
      if (v.kind() != w.kind() || !(v.direction() == w.direction()) ||
          v.align() != w.align())
        continue;
      bool same_support = v.kind() == WallKind::ray
                              ? v.base() == w.base()
                              : v.support().contains(w.base());
      if (!same_support) continue;
      v = v.with_fn(v.fn() * w.fn());
      merged = true;
      break;
    }
    if (!merged) out.push_back(w);
  }
  std::erase_if(out, [](const Wall& w) { return w.fn().is_one(); });
  std::sort(out.begin(), out.end(), [](const Wall& a, const Wall& b) {
    return wall_sort_key(a) < wall_sort_key(b);
  });
  return out;
}

bool diagram_equal(const ScatteringDiagram& a, const ScatteringDiagram& b) {
  if (a.order != b.order) return false;
  std::vector<Wall> wa = merged_walls(a), wb = merged_walls(b);
  if (wa.size() != wb.size()) return false;
  for (std::size_t i = 0; i < wa.size(); ++i)
    if (!(wa[i] == wb[i])) return false;
  return true;
}

std::string diagram_str(const ScatteringDiagram& d) {
  std::vector<Wall> walls = d.walls;
  std::sort(walls.begin(), walls.end(), [](const Wall& a, const Wall& b) {
    return wall_sort_key(a) < wall_sort_key(b);
  });
  std::vector<RatPoint> excl = d.excluded;
  std::sort(excl.begin(), excl.end(), RatPointLess{});

  std::ostringstream os;
  os << "scattering-diagram v1\n";
  os << "order " << d.order << "\n";
  os << "excluded " << excl.size() << "\n";
  for (const RatPoint& p : excl)
    os << "point " << rat_str(p.x) << " " << rat_str(p.y) << "\n";
  os << "walls " << walls.size() << "\n";
  for (const Wall& w : walls) {
    os << "wall " << (w.kind() == WallKind::line ? "line" : "ray") << " m "
       << w.direction().a << " " << w.direction().b << " base " << rat_str(w.base().x)
       << " " << rat_str(w.base().y) << " align "
       << (w.align() == WallAlign::outgoing ? "out" : "in") << " n " << w.normal().c
       << " " << w.normal().d << " fn " << w.fn().str() << "\n";
  }
  return os.str();
}

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  input_error("line " + std::to_string(line_no) + ": " + what);
}

} // namespace

ScatteringDiagram diagram_parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line() || line != "scattering-diagram v1")
    parse_fail(line_no, "expected header 'scattering-diagram v1'");

  auto expect_kv = [&](const std::string& key) -> std::string {
    if (!next_line()) parse_fail(line_no, "unexpected end of file, wanted '" + key + "'");
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) parse_fail(line_no, "expected '" + key + "', got '" + k + "'");
    std::string rest;
    std::getline(ls, rest);
    if (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
    return rest;
  };

  int order = 0;
  try {
    order = std::stoi(expect_kv("order"));
  } catch (const std::exception&) {
    parse_fail(line_no, "bad order");
  }
  if (order < 1) parse_fail(line_no, "order must be >= 1");

  long n_excluded = 0;
  try {
    n_excluded = std::stol(expect_kv("excluded"));
  } catch (const std::exception&) {
    parse_fail(line_no, "bad excluded count");
  }

  ScatteringDiagram d{order, {}, {}};
  for (long i = 0; i < n_excluded; ++i) {
    std::string rest = expect_kv("point");
    std::istringstream ls(rest);
    std::string xs, ys;
    if (!(ls >> xs >> ys)) parse_fail(line_no, "bad excluded point");
    try {
      d.excluded.push_back(RatPoint{rat_parse(xs), rat_parse(ys)});
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
  }

  long n_walls = 0;
  try {
    n_walls = std::stol(expect_kv("walls"));
  } catch (const std::exception&) {
    parse_fail(line_no, "bad wall count");
  }

  for (long i = 0; i < n_walls; ++i) {
    if (!next_line()) parse_fail(line_no, "unexpected end of file in wall list");
    std::istringstream ls(line);
    std::string tag, kind_s, key;
    ls >> tag >> kind_s;
    if (tag != "wall") parse_fail(line_no, "expected 'wall'");
    WallKind kind;
    if (kind_s == "line")
      kind = WallKind::line;
    else if (kind_s == "ray")
      kind = WallKind::ray;
    else
      parse_fail(line_no, "wall kind must be 'line' or 'ray'");

    auto expect_tok = [&](const std::string& want) {
      std::string got;
      if (!(ls >> got) || got != want)
        parse_fail(line_no, "expected token '" + want + "'");
    };

    LatticeVec m;
    expect_tok("m");
    if (!(ls >> m.a >> m.b)) parse_fail(line_no, "bad wall direction");
    expect_tok("base");
    std::string xs, ys;
    if (!(ls >> xs >> ys)) parse_fail(line_no, "bad wall base");
    expect_tok("align");
    std::string align_s;
    if (!(ls >> align_s)) parse_fail(line_no, "bad align");
    WallAlign align;
    if (align_s == "out")
      align = WallAlign::outgoing;
    else if (align_s == "in")
      align = WallAlign::incoming;
    else
      parse_fail(line_no, "align must be 'out' or 'in'");
    DualVec n;
    expect_tok("n");
    if (!(ls >> n.c >> n.d)) parse_fail(line_no, "bad wall normal");
    expect_tok("fn");
    std::string fn_text;
    std::getline(ls, fn_text);
    if (!fn_text.empty() && fn_text.front() == ' ') fn_text.erase(fn_text.begin());

    try {
      RatPoint base{rat_parse(xs), rat_parse(ys)};
      TruncatedSeries fn = TruncatedSeries::parse(fn_text, order);
      Wall w(m, base, kind, align, std::move(fn));
      if (!(w.normal() == n))
        parse_fail(line_no, "normal does not match the wall direction (expected " +
                                std::to_string(w.normal().c) + " " +
                                std::to_string(w.normal().d) + ")");
      if (!w.fn().is_one()) d.walls.push_back(std::move(w));
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
  }
  return d;
}

} // namespace tv
