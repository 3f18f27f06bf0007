#pragma once

// The tropical vertex Lie algebra and its exponentiated automorphisms.
//
// Elements c z^m t^j u_S d_n act as derivations z^{m'} -> <m', n> c z^{m+m'}...
// on the series ring; exponentials act as substitution automorphisms fixing
// the two lattice generators up to unit series factors. Everything is graded
// by the filtration order of monomials, which makes all expansions finite.

#include <optional>
#include <vector>

#include "tv/algebra.hpp"

namespace tv {

/// Rational vector in N (x) Q: the "vector coefficient" c * n of a term.
struct RationalDual {
  Rational c; // pairs against LatticeVec.a
  Rational d; // pairs against LatticeVec.b

  friend bool operator==(const RationalDual&, const RationalDual&) = default;
  bool is_zero() const { return c == 0 && d == 0; }
  RationalDual operator+(const RationalDual& o) const { return {c + o.c, d + o.d}; }
  RationalDual operator-() const { return {-c, -d}; }
  RationalDual scaled(const Rational& k) const { return {c * k, d * k}; }
};

inline Rational pair(LatticeVec m, const RationalDual& v) {
  return Rational(static_cast<long>(m.a)) * v.c + Rational(static_cast<long>(m.b)) * v.d;
}

/// One term c z^m t^j u_S d_n in split form: rational coefficient, monomial,
/// and a primitive integral derivation direction.
struct LieTerm {
  Rational coeff;
  Monomial mono;
  DualVec n;

  /// Membership in the subalgebra h (wall-type terms): <m, n> = 0.
  bool in_h() const { return pair(mono.m, n) == 0; }
};

/// Element of the Lie algebra, stored as monomial -> vector coefficient.
/// Canonical by construction; zero vector coefficients are never stored.
class LieElement {
 public:
  using TermMap = std::map<Monomial, RationalDual, MonomialLess>;

  explicit LieElement(int order);

  static LieElement term(int order, const Rational& coeff, const Monomial& mono,
                         DualVec n);

  /// f d_n for a series f: each series term becomes a Lie term.
  static LieElement from_series(const TruncatedSeries& f, DualVec n);

  int order() const { return order_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c * z^mono d_v; drops truncated or zero pieces. Rejects terms with
  /// m = 0 (the algebra has no monomial-free derivations in scope).
  void add(const Monomial& mono, const RationalDual& v);

  LieElement operator+(const LieElement& o) const;
  LieElement operator-(const LieElement& o) const;
  LieElement scaled(const Rational& k) const;

  friend bool operator==(const LieElement& x, const LieElement& y) {
    return x.order_ == y.order_ && x.terms_ == y.terms_;
  }

  /// Terms of one filtration order.
  LieElement filtration_part(int k) const;
  int min_filtration() const; // -1 when zero
  int max_filtration() const; // -1 when zero

  /// True when every term lies in h.
  bool in_h() const;

  /// Split view: coefficient times primitive integral direction. The sign of
  /// the direction is canonical: lexicographically positive (c > 0, or c = 0
  /// and d > 0).
  std::vector<LieTerm> split_terms() const;

  /// Canonical text: terms as "c t^j u{S} z^(a,b) d_(n1,n2)" joined by " + ".
  std::string str() const;

 private:
  int order_;
  TermMap terms_;
};

/// [x, y] with [z^m d_n, z^{m'} d_{n'}] = z^{m+m'} d_{<m',n>n' - <m,n'>n},
/// extended bilinearly; marker-overlapping products vanish.
LieElement bracket(const LieElement& x, const LieElement& y);

/// Applies the derivation x to a series.
TruncatedSeries apply_derivation(const LieElement& x, const TruncatedSeries& s);

/// Automorphism of the series ring, represented by the images of the two
/// lattice generators z^{e1}, z^{e2}. Each image is z^{e_i} times a unit
/// series with constant term 1.
class Automorphism {
 public:
  explicit Automorphism(int order); // identity

  Automorphism(TruncatedSeries image1, TruncatedSeries image2);

  int order() const { return order_; }
  const TruncatedSeries& image1() const { return image1_; }
  const TruncatedSeries& image2() const { return image2_; }
  bool is_identity() const;

  friend bool operator==(const Automorphism& x, const Automorphism& y) {
    return x.image1_ == y.image1_ && x.image2_ == y.image2_;
  }

  /// Substitutes the generator images into s.
  TruncatedSeries apply(const TruncatedSeries& s) const;

  std::string str() const;

 private:
  int order_;
  TruncatedSeries image1_;
  TruncatedSeries image2_;
};

/// exp of a derivation in h. Rejects terms outside h (<m, n> != 0): only the
/// subalgebra h exponentiates to monomial-preserving automorphisms here.
Automorphism exp_action(const LieElement& x);

/// theta1 after theta2 (function composition of substitutions).
Automorphism compose(const Automorphism& theta1, const Automorphism& theta2);

/// Group inverse mod the truncation order.
Automorphism invert(const Automorphism& theta);

/// The unique x with exp_action(x) = theta, extracted order by order.
/// Requires theta to be trivial modulo filtration order 1.
LieElement log_derivation(const Automorphism& theta);

} // namespace tv
