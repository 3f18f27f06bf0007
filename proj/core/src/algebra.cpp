#include "tv/algebra.hpp"

#include <bit>
#include <cctype>
#include <numeric>
#include <sstream>

namespace tv {

Rational rat(long num, long den) {
  if (den == 0) input_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rational& q) { return q.get_str(); }

Rational rat_parse(std::string_view text) {
  if (text.empty()) input_error("empty rational literal");
  std::string s(text);
  for (char ch : s) {
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '/'))
      input_error("bad rational literal '" + s + "'");
  }
  try {
    Rational q(s);
    if (q.get_den() == 0) input_error("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    input_error("bad rational literal '" + s + "'");
  }
}

DualVec normal_of(LatticeVec m) {
  if (m.is_zero()) input_error("normal_of: zero direction");
  auto [m0, g] = primitive_part(m);
  if (g != 1) input_error("normal_of: direction is not primitive");
  // rot90: <m, (-b, a)> = 0 and det(m, (-b, a)) = a^2 + b^2 > 0.
  return DualVec{-m.b, m.a};
}

std::pair<LatticeVec, std::int64_t> primitive_part(LatticeVec m) {
  if (m.is_zero()) input_error("primitive_part: zero vector");
  std::int64_t g = std::gcd(m.a < 0 ? -m.a : m.a, m.b < 0 ? -m.b : m.b);
  return {LatticeVec{m.a / g, m.b / g}, g};
}

bool lattice_less(LatticeVec x, LatticeVec y) {
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

std::string lattice_str(LatticeVec m) {
  return "(" + std::to_string(m.a) + "," + std::to_string(m.b) + ")";
}

int marker_count(MarkerSet s) { return std::popcount(s); }

MarkerSet marker_bit(int index) {
  if (index < 1 || index > 64) input_error("marker index out of range 1..64");
  return MarkerSet{1} << (index - 1);
}

std::vector<int> marker_indices(MarkerSet s) {
  std::vector<int> out;
  for (int i = 1; s != 0; ++i, s >>= 1)
    if (s & 1) out.push_back(i);
  return out;
}

// Lexicographic order on marker sets viewed as sorted index sequences.
// For equal cardinality this is: the set owning the lowest differing index
// comes first.
static bool marker_lex_less(MarkerSet x, MarkerSet y) {
  if (x == y) return false;
  MarkerSet diff = x ^ y;
  MarkerSet low = diff & (~diff + 1);
  return (x & low) != 0;
}

bool MonomialLess::operator()(const Monomial& x, const Monomial& y) const {
  if (x.t_pow != y.t_pow) return x.t_pow < y.t_pow;
  int cx = marker_count(x.markers), cy = marker_count(y.markers);
  if (cx != cy) return cx < cy;
  if (x.markers != y.markers) return marker_lex_less(x.markers, y.markers);
  return lattice_less(x.m, y.m);
}

std::string monomial_str(const Monomial& mono) {
  std::string out;
  if (mono.t_pow > 0) out += "t^" + std::to_string(mono.t_pow);
  if (mono.markers != 0) {
    if (!out.empty()) out += ' ';
    out += "u{";
    bool first = true;
    for (int idx : marker_indices(mono.markers)) {
      if (!first) out += ',';
      out += std::to_string(idx);
      first = false;
    }
    out += '}';
  }
  if (!mono.m.is_zero()) {
    if (!out.empty()) out += ' ';
    out += "z^" + lattice_str(mono.m);
  }
  return out;
}

// ---------------------------------------------------------------------------

TruncatedSeries::TruncatedSeries(int order) : order_(order) {
  if (order < 1) input_error("series order must be >= 1");
}

TruncatedSeries TruncatedSeries::constant(int order, const Rational& c) {
  TruncatedSeries s(order);
  s.add_term(Monomial{}, c);
  return s;
}

TruncatedSeries TruncatedSeries::term(int order, const Monomial& mono, const Rational& c) {
  TruncatedSeries s(order);
  s.add_term(mono, c);
  return s;
}

bool TruncatedSeries::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.is_unit() &&
         terms_.begin()->second == 1;
}

Rational TruncatedSeries::coeff(const Monomial& mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? Rational(0) : it->second;
}

void TruncatedSeries::add_term(const Monomial& mono, const Rational& c) {
  if (mono.t_pow < 0) internal_error("negative t power");
  if (mono.t_pow >= order_ || c == 0) return;
  auto [it, inserted] = terms_.emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  require_same_order(*this, o, "series_add");
  TruncatedSeries out = *this;
  for (const auto& [mono, c] : o.terms_) out.add_term(mono, c);
  return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  require_same_order(*this, o, "series_sub");
  TruncatedSeries out = *this;
  for (const auto& [mono, c] : o.terms_) out.add_term(mono, -c);
  return out;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries out(order_);
  for (const auto& [mono, c] : terms_) out.terms_.emplace(mono, -c);
  return out;
}

TruncatedSeries TruncatedSeries::scaled(const Rational& c) const {
  TruncatedSeries out(order_);
  if (c == 0) return out;
  for (const auto& [mono, k] : terms_) out.terms_.emplace(mono, k * c);
  return out;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  require_same_order(*this, o, "series_mul");
  TruncatedSeries out(order_);
  for (const auto& [mx, cx] : terms_) {
    for (const auto& [my, cy] : o.terms_) {
      if (mx.t_pow + my.t_pow >= order_) continue;
      if ((mx.markers & my.markers) != 0) continue; // u_i^2 = 0
      Monomial mono{mx.m + my.m, mx.t_pow + my.t_pow, mx.markers | my.markers};
      out.add_term(mono, cx * cy);
    }
  }
  return out;
}

TruncatedSeries TruncatedSeries::truncated(int order) const {
  if (order > order_)
    input_error("truncated: cannot raise truncation order");
  TruncatedSeries out(order);
  for (const auto& [mono, c] : terms_) out.add_term(mono, c);
  return out;
}

TruncatedSeries TruncatedSeries::filtration_part(int k) const {
  TruncatedSeries out(order_);
  for (const auto& [mono, c] : terms_)
    if (mono.filtration() == k) out.terms_.emplace(mono, c);
  return out;
}

int TruncatedSeries::min_filtration() const {
  int best = -1;
  for (const auto& [mono, c] : terms_) {
    int f = mono.filtration();
    if (best < 0 || f < best) best = f;
  }
  return best;
}

bool TruncatedSeries::positive_filtration() const {
  for (const auto& [mono, c] : terms_)
    if (mono.filtration() == 0) return false;
  return true;
}

TruncatedSeries TruncatedSeries::exp() const {
  if (!positive_filtration())
    input_error("series_exp: argument has a filtration-order-0 part");
  TruncatedSeries out = one(order_);
  TruncatedSeries power = one(order_);
  Rational factorial(1);
  for (int i = 1; !power.is_zero(); ++i) {
    power = power * *this;
    factorial *= i;
    out = out + power.scaled(Rational(1) / factorial);
  }
  return out;
}

TruncatedSeries TruncatedSeries::log() const {
  TruncatedSeries h = *this - one(order_);
  if (!h.positive_filtration())
    input_error("series_log: argument is not 1 + (positive filtration order)");
  TruncatedSeries out(order_);
  TruncatedSeries power = one(order_);
  for (int i = 1; ; ++i) {
    power = power * h;
    if (power.is_zero()) break;
    Rational c = Rational(i % 2 == 1 ? 1 : -1) / Rational(i);
    out = out + power.scaled(c);
  }
  return out;
}

TruncatedSeries TruncatedSeries::pow(std::int64_t e) const {
  // Split off the unique filtration-order-0 term c z^m0.
  const Monomial* lead = nullptr;
  for (const auto& [mono, c] : terms_) {
    if (mono.filtration() == 0) {
      if (lead) input_error("series_pow: several filtration-order-0 terms");
      lead = &mono;
    }
  }
  if (!lead) input_error("series_pow: no invertible leading term");
  Monomial m0 = *lead;
  Rational c0 = terms_.at(m0);

  // h = f / (c0 z^m0) - 1, all of positive filtration order.
  TruncatedSeries h(order_);
  for (const auto& [mono, c] : terms_) {
    if (mono == m0) continue;
    h.add_term(Monomial{mono.m - m0.m, mono.t_pow, mono.markers}, c / c0);
  }

  Rational c0e(1);
  for (std::int64_t i = 0; i < (e < 0 ? -e : e); ++i) c0e *= c0;
  if (e < 0) c0e = Rational(1) / c0e;

  // (1 + h)^e by the binomial series; h is nilpotent under truncation.
  TruncatedSeries sum = one(order_);
  TruncatedSeries power = one(order_);
  Rational binom(1);
  for (std::int64_t i = 1; ; ++i) {
    power = power * h;
    if (power.is_zero()) break;
    binom *= Rational(static_cast<long>(e - i + 1)) / Rational(static_cast<long>(i));
    if (binom == 0) break;
    sum = sum + power.scaled(binom);
  }
  return sum * term(order_, Monomial{m0.m * e, 0, 0}, c0e);
}

std::string TruncatedSeries::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [mono, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += rat_str(c);
    std::string ms = monomial_str(mono);
    if (!ms.empty()) {
      out += ' ';
      out += ms;
    }
  }
  return out;
}

// -- parsing ----------------------------------------------------------------

namespace {

struct TermTokens {
  std::vector<std::string> parts;
};

std::vector<std::string> split_terms(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  std::size_t i = 0;
  while (i < text.size()) {
    if (i + 2 < text.size() && text[i] == ' ' && text[i + 1] == '+' && text[i + 2] == ' ') {
      out.push_back(cur);
      cur.clear();
      i += 3;
    } else {
      cur += text[i++];
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::int64_t parse_int(std::string_view tok, const char* what) {
  try {
    std::size_t used = 0;
    std::string s(tok);
    long long v = std::stoll(s, &used);
    if (used != s.size()) input_error(std::string("bad ") + what + " '" + s + "'");
    return v;
  } catch (const std::exception&) {
    input_error(std::string("bad ") + what + " '" + std::string(tok) + "'");
  }
}

} // namespace

TruncatedSeries TruncatedSeries::parse(std::string_view text, int order) {
  TruncatedSeries out(order);
  std::string trimmed(text);
  if (trimmed == "0") return out;
  for (const std::string& term_text : split_terms(trimmed)) {
    auto toks = split_ws(term_text);
    if (toks.empty()) input_error("empty term in series '" + trimmed + "'");
    Rational c = rat_parse(toks[0]);
    Monomial mono;
    bool seen_t = false, seen_u = false, seen_z = false;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      const std::string& tok = toks[i];
      if (tok.rfind("t^", 0) == 0) {
        if (seen_t) input_error("repeated t part in '" + term_text + "'");
        seen_t = true;
        std::int64_t j = parse_int(tok.substr(2), "t exponent");
        if (j < 0) input_error("negative t exponent in '" + term_text + "'");
        mono.t_pow = static_cast<int>(j);
      } else if (tok.rfind("u{", 0) == 0 && tok.back() == '}') {
        if (seen_u) input_error("repeated u part in '" + term_text + "'");
        seen_u = true;
        std::string body = tok.substr(2, tok.size() - 3);
        std::size_t pos = 0;
        while (pos < body.size()) {
          std::size_t comma = body.find(',', pos);
          std::string idx = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
          MarkerSet bit = marker_bit(static_cast<int>(parse_int(idx, "marker index")));
          if (mono.markers & bit) input_error("repeated marker in '" + term_text + "'");
          mono.markers |= bit;
          if (comma == std::string::npos) break;
          pos = comma + 1;
        }
      } else if (tok.rfind("z^(", 0) == 0 && tok.back() == ')') {
        if (seen_z) input_error("repeated z part in '" + term_text + "'");
        seen_z = true;
        std::string body = tok.substr(3, tok.size() - 4);
        std::size_t comma = body.find(',');
        if (comma == std::string::npos) input_error("bad exponent '" + tok + "'");
        mono.m.a = parse_int(body.substr(0, comma), "z exponent");
        mono.m.b = parse_int(body.substr(comma + 1), "z exponent");
      } else {
        input_error("unrecognized token '" + tok + "' in series term");
      }
    }
    out.add_term(mono, c);
  }
  return out;
}

void require_same_order(const TruncatedSeries& x, const TruncatedSeries& y,
                        const char* where) {
  if (x.order() != y.order())
    input_error(std::string(where) + ": mismatched truncation orders " +
                std::to_string(x.order()) + " vs " + std::to_string(y.order()));
}

} // namespace tv
