#pragma once

// Exact arithmetic for lattices, monomials and truncated formal series.
//
// Series live in Q[M][u_1..u_64][[t]] / (t^N, u_i^2): Laurent monomials z^m
// for m in a rank-2 lattice M, a formal deformation parameter t truncated at
// order N, and squarefree marker variables u_i. Coefficients are exact
// rationals (GMP); there is no floating point anywhere in this module.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "tv/error.hpp"

namespace tv {

using Rational = mpq_class;

/// Canonicalized rational from a numerator/denominator pair.
Rational rat(long num, long den = 1);

/// "p" or "p/q", always reduced, sign on the numerator.
std::string rat_str(const Rational& q);

/// Parses "p" or "p/q". Throws Error(input) on garbage or zero denominator.
Rational rat_parse(std::string_view text);

// ---------------------------------------------------------------------------
// Lattice vectors

/// Element of the lattice M = Z^2 (monomial exponents, wall directions).
struct LatticeVec {
  std::int64_t a = 0;
  std::int64_t b = 0;

  friend bool operator==(const LatticeVec&, const LatticeVec&) = default;
  bool is_zero() const { return a == 0 && b == 0; }
  LatticeVec operator+(LatticeVec o) const { return {a + o.a, b + o.b}; }
  LatticeVec operator-(LatticeVec o) const { return {a - o.a, b - o.b}; }
  LatticeVec operator-() const { return {-a, -b}; }
  LatticeVec operator*(std::int64_t k) const { return {a * k, b * k}; }
};

/// Element of the dual lattice N = Hom(M, Z) (derivation directions).
struct DualVec {
  std::int64_t c = 0;
  std::int64_t d = 0;

  friend bool operator==(const DualVec&, const DualVec&) = default;
  bool is_zero() const { return c == 0 && d == 0; }
  DualVec operator+(DualVec o) const { return {c + o.c, d + o.d}; }
  DualVec operator-() const { return {-c, -d}; }
  DualVec operator*(std::int64_t k) const { return {c * k, d * k}; }
};

/// Natural pairing <m, n> between M and N.
inline std::int64_t pair(LatticeVec m, DualVec n) { return m.a * n.c + m.b * n.d; }

/// Determinant det(u | v); positive iff {u, v} is positively oriented.
inline std::int64_t cross(LatticeVec u, LatticeVec v) { return u.a * v.b - u.b * v.a; }

/// The unique primitive n with <m, n> = 0 and {m, n} positively oriented.
/// Requires m primitive and nonzero.
DualVec normal_of(LatticeVec m);

/// Factors m = g * m0 with m0 primitive and g > 0. Throws on m = 0.
std::pair<LatticeVec, std::int64_t> primitive_part(LatticeVec m);

/// Lexicographic order on (a, b); used for canonical term ordering.
bool lattice_less(LatticeVec x, LatticeVec y);

std::string lattice_str(LatticeVec m);

// ---------------------------------------------------------------------------
// Monomials

/// Marker sets are bitmasks: bit i-1 stands for the marker u_i, 1 <= i <= 64.
using MarkerSet = std::uint64_t;

int marker_count(MarkerSet s);
MarkerSet marker_bit(int index); // index in 1..64
std::vector<int> marker_indices(MarkerSet s);

/// Monomial t^j u_S z^m. Markers are squarefree: any product of monomials
/// with overlapping marker sets is zero.
struct Monomial {
  LatticeVec m;
  int t_pow = 0;        // j >= 0
  MarkerSet markers = 0;

  friend bool operator==(const Monomial&, const Monomial&) = default;

  /// Filtration order j + |S|; positive order drives every truncation and
  /// termination argument in the library.
  int filtration() const { return t_pow + marker_count(markers); }

  bool is_unit() const { return m.is_zero() && t_pow == 0 && markers == 0; }
};

/// Canonical term ordering: lexicographic on (j, |S|, S, m) with S compared
/// as a sorted index sequence and m lexicographically on (a, b).
struct MonomialLess {
  bool operator()(const Monomial& x, const Monomial& y) const;
};

std::string monomial_str(const Monomial& mono); // "" for the unit monomial

// ---------------------------------------------------------------------------
// Truncated series

/// Formal series truncated at t-order N with squarefree markers.
/// Immutable value semantics: all operations return new series.
class TruncatedSeries {
 public:
  using TermMap = std::map<Monomial, Rational, MonomialLess>;

  explicit TruncatedSeries(int order);

  static TruncatedSeries constant(int order, const Rational& c);
  static TruncatedSeries one(int order) { return constant(order, 1); }
  static TruncatedSeries term(int order, const Monomial& mono, const Rational& c);

  int order() const { return order_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  std::size_t size() const { return terms_.size(); }

  Rational coeff(const Monomial& mono) const;

  /// Adds c * mono in place; silently drops t-degrees >= order.
  void add_term(const Monomial& mono, const Rational& c);

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries operator-() const;
  TruncatedSeries scaled(const Rational& c) const;

  friend bool operator==(const TruncatedSeries& x, const TruncatedSeries& y) {
    return x.order_ == y.order_ && x.terms_ == y.terms_;
  }

  /// Re-truncates to a (lower or equal) order.
  TruncatedSeries truncated(int order) const;

  /// Keeps only terms of the given filtration order.
  TruncatedSeries filtration_part(int k) const;

  /// Smallest filtration order among stored terms; -1 when zero.
  int min_filtration() const;

  /// True when every term has positive filtration order (j >= 1 or S != {}).
  bool positive_filtration() const;

  /// exp(f): requires every term of f to have positive filtration order.
  TruncatedSeries exp() const;

  /// log(1 + h): requires constant part exactly 1, rest of positive order.
  TruncatedSeries log() const;

  /// f^e for integer e (negative allowed). Requires f = c z^m0 (1 + h) with
  /// a single term of filtration order zero and h of positive order.
  TruncatedSeries pow(std::int64_t e) const;

  /// Canonical text form: terms in canonical order joined by " + ", each as
  /// "p/q t^j u{i,...} z^(a,b)" with trivial parts omitted. Zero is "0".
  std::string str() const;

  /// Inverse of str(). Accepts any term order; result is canonical.
  static TruncatedSeries parse(std::string_view text, int order);

 private:
  int order_;
  TermMap terms_;
};

/// Throws Error(input) unless both series share one truncation order.
void require_same_order(const TruncatedSeries& x, const TruncatedSeries& y,
                        const char* where);

} // namespace tv
