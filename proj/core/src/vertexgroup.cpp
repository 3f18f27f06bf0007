#include "tv/vertexgroup.hpp"

#include <algorithm>

namespace tv {

LieElement::LieElement(int order) : order_(order) {
  if (order < 1) input_error("Lie element order must be >= 1");
}

LieElement LieElement::term(int order, const Rational& coeff, const Monomial& mono,
                            DualVec n) {
  LieElement x(order);
  x.add(mono, RationalDual{coeff * Rational(static_cast<long>(n.c)),
                           coeff * Rational(static_cast<long>(n.d))});
  return x;
}

LieElement LieElement::from_series(const TruncatedSeries& f, DualVec n) {
  LieElement x(f.order());
  for (const auto& [mono, c] : f.terms())
    x.add(mono, RationalDual{c * Rational(static_cast<long>(n.c)),
                             c * Rational(static_cast<long>(n.d))});
  return x;
}

void LieElement::add(const Monomial& mono, const RationalDual& v) {
  if (v.is_zero() || mono.t_pow >= order_) return;
  if (mono.m.is_zero())
    internal_error("Lie term with zero monomial exponent");
  if (mono.filtration() < 1)
    input_error("Lie term must have positive filtration order");
  auto [it, inserted] = terms_.emplace(mono, v);
  if (!inserted) {
    it->second = it->second + v;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

LieElement LieElement::operator+(const LieElement& o) const {
  if (order_ != o.order_) input_error("Lie add: mismatched orders");
  LieElement out = *this;
  for (const auto& [mono, v] : o.terms_) out.add(mono, v);
  return out;
}

LieElement LieElement::operator-(const LieElement& o) const {
  if (order_ != o.order_) input_error("Lie sub: mismatched orders");
  LieElement out = *this;
  for (const auto& [mono, v] : o.terms_) out.add(mono, -v);
  return out;
}

LieElement LieElement::scaled(const Rational& k) const {
  LieElement out(order_);
  if (k == 0) return out;
  for (const auto& [mono, v] : terms_) out.terms_.emplace(mono, v.scaled(k));
  return out;
}

LieElement LieElement::filtration_part(int k) const {
  LieElement out(order_);
  for (const auto& [mono, v] : terms_)
    if (mono.filtration() == k) out.terms_.emplace(mono, v);
  return out;
}

int LieElement::min_filtration() const {
  int best = -1;
  for (const auto& [mono, v] : terms_) {
    int f = mono.filtration();
    if (best < 0 || f < best) best = f;
  }
  return best;
}

int LieElement::max_filtration() const {
  int best = -1;
  for (const auto& [mono, v] : terms_) best = std::max(best, mono.filtration());
  return best;
}

bool LieElement::in_h() const {
  for (const auto& [mono, v] : terms_)
    if (pair(mono.m, v) != 0) return false;
  return true;
}

std::vector<LieTerm> LieElement::split_terms() const {
  std::vector<LieTerm> out;
  out.reserve(terms_.size());
  for (const auto& [mono, v] : terms_) {
    // v = coeff * n with n primitive integral, sign made lex-positive.
    mpz_class num_c = v.c.get_num(), den_c = v.c.get_den();
    mpz_class num_d = v.d.get_num(), den_d = v.d.get_den();
    mpz_class den;
    mpz_lcm(den.get_mpz_t(), den_c.get_mpz_t(), den_d.get_mpz_t());
    mpz_class wc = num_c * (den / den_c);
    mpz_class wd = num_d * (den / den_d);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), wc.get_mpz_t(), wd.get_mpz_t());
    mpz_class nc = wc / g, nd = wd / g;
    Rational coeff(g, den);
    coeff.canonicalize();
    if (nc < 0 || (nc == 0 && nd < 0)) {
      nc = -nc;
      nd = -nd;
      coeff = -coeff;
    }
    if (!nc.fits_slong_p() || !nd.fits_slong_p())
      internal_error("derivation direction exceeds 64-bit range");
    out.push_back(LieTerm{coeff, mono, DualVec{nc.get_si(), nd.get_si()}});
  }
  return out;
}

std::string LieElement::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const LieTerm& t : split_terms()) {
    if (!out.empty()) out += " + ";
    out += rat_str(t.coeff);
    std::string ms = monomial_str(t.mono);
    if (!ms.empty()) out += ' ' + ms;
    out += " d_(" + std::to_string(t.n.c) + "," + std::to_string(t.n.d) + ")";
  }
  return out;
}

LieElement bracket(const LieElement& x, const LieElement& y) {
  if (x.order() != y.order()) input_error("bracket: mismatched orders");
  LieElement out(x.order());
  for (const auto& [mx, vx] : x.terms()) {
    for (const auto& [my, vy] : y.terms()) {
      if (mx.t_pow + my.t_pow >= x.order()) continue;
      if ((mx.markers & my.markers) != 0) continue;
      Monomial mono{mx.m + my.m, mx.t_pow + my.t_pow, mx.markers | my.markers};
      // d_{<m', n> n' - <m, n'> n} on vector coefficients.
      Rational left = pair(my.m, vx);
      Rational right = pair(mx.m, vy);
      RationalDual v{left * vy.c - right * vx.c, left * vy.d - right * vx.d};
      if (v.is_zero()) continue;
      if (mono.m.is_zero())
        internal_error("bracket produced a monomial-free derivation");
      out.add(mono, v);
    }
  }
  return out;
}

TruncatedSeries apply_derivation(const LieElement& x, const TruncatedSeries& s) {
  if (x.order() != s.order()) input_error("apply_derivation: mismatched orders");
  TruncatedSeries out(s.order());
  for (const auto& [ms, cs] : s.terms()) {
    for (const auto& [mx, vx] : x.terms()) {
      if (ms.t_pow + mx.t_pow >= s.order()) continue;
      if ((ms.markers & mx.markers) != 0) continue;
      Rational w = pair(ms.m, vx);
      if (w == 0) continue;
      Monomial mono{ms.m + mx.m, ms.t_pow + mx.t_pow, ms.markers | mx.markers};
      out.add_term(mono, cs * w);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

const LatticeVec kGen1{1, 0};
const LatticeVec kGen2{0, 1};

void check_image(const TruncatedSeries& img, LatticeVec gen) {
  bool found = false;
  for (const auto& [mono, c] : img.terms()) {
    if (mono.filtration() == 0) {
      if (found || mono.m != gen || c != 1)
        input_error("automorphism image is not z^e_i * (1 + higher order)");
      found = true;
    }
  }
  if (!found) input_error("automorphism image lacks its leading monomial");
}

} // namespace

Automorphism::Automorphism(int order)
    : order_(order),
      image1_(TruncatedSeries::term(order, Monomial{kGen1, 0, 0}, 1)),
      image2_(TruncatedSeries::term(order, Monomial{kGen2, 0, 0}, 1)) {}

Automorphism::Automorphism(TruncatedSeries image1, TruncatedSeries image2)
    : order_(image1.order()), image1_(std::move(image1)), image2_(std::move(image2)) {
  require_same_order(image1_, image2_, "automorphism");
  check_image(image1_, kGen1);
  check_image(image2_, kGen2);
}

bool Automorphism::is_identity() const {
  return image1_.size() == 1 && image2_.size() == 1;
}

TruncatedSeries Automorphism::apply(const TruncatedSeries& s) const {
  if (s.order() != order_) input_error("automorphism apply: mismatched orders");
  std::map<std::int64_t, TruncatedSeries> cache1, cache2;
  auto power = [this](const TruncatedSeries& img, std::int64_t e,
                      std::map<std::int64_t, TruncatedSeries>& cache) {
    auto it = cache.find(e);
    if (it == cache.end()) it = cache.emplace(e, img.pow(e)).first;
    return it->second;
  };
  TruncatedSeries out(order_);
  for (const auto& [mono, c] : s.terms()) {
    TruncatedSeries img = power(image1_, mono.m.a, cache1) *
                          power(image2_, mono.m.b, cache2);
    TruncatedSeries rest = TruncatedSeries::term(order_, Monomial{{0, 0}, mono.t_pow, mono.markers}, c);
    out = out + img * rest;
  }
  return out;
}

std::string Automorphism::str() const {
  return "z^(1,0) -> " + image1_.str() + " ; z^(0,1) -> " + image2_.str();
}

Automorphism exp_action(const LieElement& x) {
  if (!x.in_h())
    input_error("exp_action: element is not in the subalgebra h (<m,n> != 0)");
  int order = x.order();
  auto exp_image = [&](LatticeVec gen) {
    TruncatedSeries img(order);
    TruncatedSeries cur = TruncatedSeries::term(order, Monomial{gen, 0, 0}, 1);
    Rational factorial(1);
    img = img + cur;
    for (int r = 1; ; ++r) {
      cur = apply_derivation(x, cur);
      if (cur.is_zero()) break;
      factorial *= r;
      img = img + cur.scaled(Rational(1) / factorial);
    }
    return img;
  };
  return Automorphism(exp_image(kGen1), exp_image(kGen2));
}

Automorphism compose(const Automorphism& theta1, const Automorphism& theta2) {
  if (theta1.order() != theta2.order()) input_error("compose: mismatched orders");
  return Automorphism(theta1.apply(theta2.image1()), theta1.apply(theta2.image2()));
}

Automorphism invert(const Automorphism& theta) {
  return exp_action(log_derivation(theta).scaled(-1));
}

LieElement log_derivation(const Automorphism& theta) {
  int order = theta.order();
  MarkerSet all = 0;
  for (const auto& [mono, c] : theta.image1().terms()) all |= mono.markers;
  for (const auto& [mono, c] : theta.image2().terms()) all |= mono.markers;
  const int max_filt = (order - 1) + marker_count(all);

  LieElement x(order);
  while (true) {
    Automorphism psi = exp_action(x);
    TruncatedSeries d1 = theta.image1() - psi.image1();
    TruncatedSeries d2 = theta.image2() - psi.image2();
    if (d1.is_zero() && d2.is_zero()) return x;
    int k1 = d1.min_filtration(), k2 = d2.min_filtration();
    int k = k1 < 0 ? k2 : (k2 < 0 ? k1 : std::min(k1, k2));
    if (k < 1 || k > max_filt)
      internal_error("log_derivation failed to converge");
    // At order k the discrepancy is linear in the missing part Delta:
    // delta_i = sum over Delta terms of <e_i, v> z^{e_i + m} t^j u_S.
    LieElement delta(order);
    for (const auto& [mono, c] : d1.filtration_part(k).terms())
      delta.add(Monomial{mono.m - kGen1, mono.t_pow, mono.markers}, RationalDual{c, 0});
    for (const auto& [mono, c] : d2.filtration_part(k).terms())
      delta.add(Monomial{mono.m - kGen2, mono.t_pow, mono.markers}, RationalDual{0, c});
    if (delta.is_zero())
      internal_error("log_derivation: discrepancy is not a derivation");
    x = x + delta;
  }
}

} // namespace tv
