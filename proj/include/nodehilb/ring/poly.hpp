#pragma once

// Canonical-form polynomials in the binomial quotient ring described by a
// Context. Every stored monomial satisfies min(exp x_i, exp y_i) = 0; when
// y_i is localized x_i is eliminated entirely (x_i = t y_i^-1), and when only
// x_i is localized y_i is eliminated (y_i = t x_i^-1).

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nodehilb/errors.hpp"
#include "nodehilb/ring/context.hpp"

namespace nodehilb {

using Rational = mpq_class;
using Integer = mpz_class;
using Exponents = std::vector<int>;

/// Canonical fraction n/d.
inline Rational frac(const Integer& n, const Integer& d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline long total_degree(const Exponents& e) {
  long d = 0;
  for (int v : e) d += v;
  return d;
}

/// Graded lexicographic comparison; registry order decides ties.
inline bool grlex_greater(const Exponents& a, const Exponents& b) {
  long da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const { return grlex_greater(a, b); }
};

struct Term {
  Exponents exp;
  Rational coef;
};

namespace detail {

inline void check_exponent_signs(const Context& ctx, const Exponents& e) {
  for (std::size_t v = 0; v < e.size(); ++v)
    if (e[v] < 0 && !ctx.localized(static_cast<int>(v)))
      throw NegativeExponentNotLocalized("negative exponent on " + ctx.name(static_cast<int>(v)) +
                                         ", which is not localized");
}

/// Rewrites a monomial into canonical form in place.
inline void normalize_monomial(const Context& ctx, Exponents& e) {
  if (e.size() != ctx.size()) throw ContextMismatch("exponent vector has wrong length");
  check_exponent_signs(ctx, e);
  const int t = ctx.t();
  for (int s = 0; s < ctx.pair_count(); ++s) {
    const int xv = ctx.x_var(s), yv = ctx.y_var(s);
    int& a = e[xv];
    int& b = e[yv];
    if (ctx.localized(yv)) {
      // x^a = t^a y^-a
      e[t] += a;
      b -= a;
      a = 0;
    } else if (ctx.localized(xv)) {
      e[t] += b;
      a -= b;
      b = 0;
    } else {
      int c = std::min(a, b);
      e[t] += c;
      a -= c;
      b -= c;
    }
  }
}

/// Laurent image: y_i folded into x_i and t (y_i = t x_i^-1).
inline Exponents to_laurent(const Context& ctx, Exponents e) {
  for (int s = 0; s < ctx.pair_count(); ++s) {
    const int xv = ctx.x_var(s), yv = ctx.y_var(s);
    e[xv] -= e[yv];
    e[ctx.t()] += e[yv];
    e[yv] = 0;
  }
  return e;
}

/// Inverse of to_laurent; returns false when the monomial is not in the ring.
inline bool from_laurent(const Context& ctx, Exponents& e) {
  for (int s = 0; s < ctx.pair_count(); ++s) {
    const int xv = ctx.x_var(s), yv = ctx.y_var(s);
    int a = e[xv];
    if (ctx.localized(yv) || (!ctx.localized(xv) && a < 0)) {
      // x^a t^c = y^-a t^(c+a)
      e[yv] = -a;
      e[ctx.t()] += a;
      e[xv] = 0;
    }
  }
  for (std::size_t v = 0; v < e.size(); ++v)
    if (e[v] < 0 && !ctx.localized(static_cast<int>(v))) return false;
  return true;
}

struct ExponentHash {
  std::size_t operator()(const Exponents& e) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int v : e) {
      h ^= static_cast<std::size_t>(static_cast<unsigned>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct LexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] > b[i];
    return false;
  }
};

}  // namespace detail

/// Same variables, kinds and order; localization may differ.
inline bool same_registry(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t v = 0; v < a.size(); ++v) {
    const auto& x = a.registry()[v];
    const auto& y = b.registry()[v];
    if (x.name != y.name || x.kind != y.kind || x.index != y.index) return false;
  }
  return true;
}

class Poly {
 public:
  Poly() = default;
  explicit Poly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

  static Poly constant(ContextPtr ctx, const Rational& c) {
    Poly p(std::move(ctx));
    if (c != 0) p.terms_.push_back({Exponents(p.ctx_->size(), 0), c});
    return p;
  }

  static Poly variable(ContextPtr ctx, std::string_view name, int power = 1) {
    Exponents e(ctx->size(), 0);
    e[ctx->id(name)] = power;
    return monomial(std::move(ctx), std::move(e), 1);
  }

  static Poly monomial(ContextPtr ctx, Exponents e, const Rational& c = 1) {
    std::vector<Term> t;
    t.push_back({std::move(e), c});
    return from_terms(std::move(ctx), std::move(t));
  }

  /// normalize(raw terms): canonicalizes every term and collects.
  static Poly from_terms(ContextPtr ctx, std::vector<Term> raw) {
    Poly p(std::move(ctx));
    for (auto& term : raw) detail::normalize_monomial(*p.ctx_, term.exp);
    p.terms_ = std::move(raw);
    p.collect();
    return p;
  }

  /// Parses an expression such as "2*t - x1*y2 + 3/2*y1^-1".
  static Poly parse(ContextPtr ctx, std::string_view text);

  const ContextPtr& context() const noexcept { return ctx_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && std::all_of(terms_[0].exp.begin(), terms_[0].exp.end(),
                                              [](int v) { return v == 0; }));
  }
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  const Term& leading() const {
    if (terms_.empty()) throw ZeroPolynomial("leading term of zero");
    return terms_.front();
  }
  Rational constant_term() const {
    for (const auto& t : terms_)
      if (std::all_of(t.exp.begin(), t.exp.end(), [](int v) { return v == 0; })) return t.coef;
    return 0;
  }

  /// Largest exponent of a variable over all terms (0 for the zero polynomial).
  int degree_in(std::string_view name) const {
    int v = ctx_->id(name), d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exp[v]);
    return d;
  }
  long total_degree() const {
    long d = 0;
    for (const auto& t : terms_) d = std::max(d, nodehilb::total_degree(t.exp));
    return d;
  }
  bool uses(std::string_view name) const {
    auto v = ctx_->find(name);
    if (!v) return false;
    return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.exp[*v] != 0; });
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = add(o, 1); }
  Poly& operator-=(const Poly& o) { return *this = add(o, -1); }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator+(const Poly& a, const Poly& b) { return a.add(b, 1); }
  friend Poly operator-(const Poly& a, const Poly& b) { return a.add(b, -1); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.require_same(b);
    if (a.is_zero() || b.is_zero()) return Poly(a.ctx_);
    if (a.terms_.size() < b.terms_.size()) return b * a;
    std::unordered_map<Exponents, Rational, detail::ExponentHash> acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    const std::size_t n = a.ctx_->size();
    const bool relations = !a.ctx_->plain();
    Exponents e(n);
    Rational prod;
    for (const auto& tb : b.terms_) {
      for (const auto& ta : a.terms_) {
        for (std::size_t v = 0; v < n; ++v) e[v] = ta.exp[v] + tb.exp[v];
        if (relations) detail::normalize_monomial(*a.ctx_, e);
        mpq_mul(prod.get_mpq_t(), ta.coef.get_mpq_t(), tb.coef.get_mpq_t());
        auto [it, fresh] = acc.try_emplace(e, prod);
        if (!fresh) it->second += prod;
      }
    }
    Poly r(a.ctx_);
    r.terms_.reserve(acc.size());
    for (auto& [exp, c] : acc)
      if (c != 0) r.terms_.push_back({exp, std::move(c)});
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& x, const Term& y) { return grlex_greater(x.exp, y.exp); });
    return r;
  }

  friend Poly operator*(const Rational& c, const Poly& p) {
    if (c == 0) return Poly(p.ctx_);
    Poly r = p;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
  }
  friend Poly operator*(const Poly& p, const Rational& c) { return c * p; }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (!a.ctx_->same_as(*b.ctx_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].exp != b.terms_[i].exp || a.terms_[i].coef != b.terms_[i].coef) return false;
    return true;
  }

  Poly pow(unsigned k) const {
    Poly result = constant(ctx_, 1), base = *this;
    while (k) {
      if (k & 1u) result = result * base;
      k >>= 1u;
      if (k) base = base * base;
    }
    return result;
  }

  /// Exact quotient r with r * q == *this, or NotDivisible.
  Poly exact_div(const Poly& q) const;

  /// Image under a partial assignment; unassigned variables map to the
  /// variable of the same name in `target`.
  Poly substitute(const std::map<std::string, Poly>& assignment, const ContextPtr& target) const;
  Poly substitute(const std::map<std::string, Poly>& assignment) const {
    return substitute(assignment, ctx_);
  }
  /// Same polynomial re-expressed in another context (matched by name).
  Poly convert(const ContextPtr& target) const {
    if (same_registry(*ctx_, *target)) return from_terms(target, terms_);
    return substitute({}, target);
  }

  /// Minimal exponent of `name` over all terms.
  int adic_order(std::string_view name) const {
    if (is_zero()) throw ZeroPolynomial("order of the zero polynomial");
    int v = ctx_->id(name);
    int best = terms_.front().exp[v];
    for (const auto& t : terms_) best = std::min(best, t.exp[v]);
    return best;
  }
  int t_adic_order() const {
    if (ctx_->t() < 0) throw UnknownVariable("context has no t");
    return adic_order(ctx_->name(ctx_->t()));
  }

  /// Canonical text: terms in descending graded-lex order.
  std::string str() const;

  /// Deterministic hash of the canonical serialization.
  std::size_t hash() const { return std::hash<std::string>{}(str()); }

  /// Coefficient of an (already canonical) monomial.
  Rational coefficient(const Exponents& e) const {
    for (const auto& t : terms_)
      if (t.exp == e) return t.coef;
    return 0;
  }

 private:
  void require_same(const Poly& o) const {
    if (!ctx_ || !o.ctx_ || !ctx_->same_as(*o.ctx_))
      throw ContextMismatch("operands live in different contexts");
  }

  Poly add(const Poly& o, int sign) const {
    require_same(o);
    Poly r(ctx_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      if (j == o.terms_.size() ||
          (i < terms_.size() && grlex_greater(terms_[i].exp, o.terms_[j].exp))) {
        r.terms_.push_back(terms_[i++]);
      } else if (i == terms_.size() || grlex_greater(o.terms_[j].exp, terms_[i].exp)) {
        r.terms_.push_back({o.terms_[j].exp, sign * o.terms_[j].coef});
        ++j;
      } else {
        Rational c = terms_[i].coef + sign * o.terms_[j].coef;
        if (c != 0) r.terms_.push_back({terms_[i].exp, c});
        ++i;
        ++j;
      }
    }
    return r;
  }

  void collect() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return grlex_greater(a.exp, b.exp); });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().exp == t.exp)
        out.back().coef += t.coef;
      else
        out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.coef == 0; });
    terms_ = std::move(out);
  }

  ContextPtr ctx_;
  std::vector<Term> terms_;
};

inline Poly operator+(const Poly& p, const Rational& c) { return p + Poly::constant(p.context(), c); }
inline Poly operator-(const Poly& p, const Rational& c) { return p - Poly::constant(p.context(), c); }

// ---------------------------------------------------------------------------
// Serialization

inline std::string monomial_str(const Context& ctx, const Exponents& e) {
  std::string out;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] == 0) continue;
    if (!out.empty()) out += '*';
    out += ctx.name(static_cast<int>(v));
    if (e[v] != 1) out += '^' + std::to_string(e[v]);
  }
  return out;
}

inline std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coef;
    if (first) {
      if (c < 0) out += '-';
    } else {
      out += c < 0 ? " - " : " + ";
    }
    c = abs(c);
    std::string mono = monomial_str(*ctx_, t.exp);
    if (mono.empty()) {
      out += c.get_str();
    } else {
      if (c != 1) out += c.get_str() + '*';
      out += mono;
    }
    first = false;
  }
  return out;
}

namespace detail {

class PolyParser {
 public:
  PolyParser(ContextPtr ctx, std::string_view s) : ctx_(std::move(ctx)), s_(s) {}

  Poly run() {
    Poly p = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(why + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly sum() {
    Poly acc(ctx_);
    bool negate = false;
    if (eat('-')) negate = true;
    else eat('+');
    Poly first = product();
    acc = negate ? -first : first;
    for (;;) {
      if (eat('+')) acc = acc + product();
      else if (eat('-')) acc = acc - product();
      else return acc;
    }
  }

  Poly product() {
    Poly acc = power();
    for (;;) {
      if (eat('*')) acc = acc * power();
      else if (eat('/')) {
        Poly d = power();
        if (!d.is_constant() || d.is_zero()) fail("division only by nonzero constants");
        acc = acc * Rational(1 / d.constant_term());
      } else return acc;
    }
  }

  Poly power() {
    Poly base = atom();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      long k = integer();
      if (neg) {
        if (!base.is_monomial()) fail("negative power of a non-monomial");
        const Term& t = base.leading();
        Exponents e = t.exp;
        for (auto& v : e) v *= -static_cast<int>(k);
        Rational c = 1;
        for (long i = 0; i < k; ++i) c /= t.coef;
        return Poly::monomial(ctx_, std::move(e), c);
      }
      return base.pow(static_cast<unsigned>(k));
    }
    return base;
  }

  long integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  Poly atom() {
    skip();
    if (eat('(')) {
      Poly p = sum();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Poly::constant(ctx_, Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      return Poly::variable(ctx_, s_.substr(start, pos_ - start));
    }
    fail("expected operand");
  }

  ContextPtr ctx_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly Poly::parse(ContextPtr ctx, std::string_view text) {
  return detail::PolyParser(std::move(ctx), text).run();
}

// ---------------------------------------------------------------------------
// Exact division through the Laurent embedding y_i = t / x_i.

inline Poly Poly::exact_div(const Poly& q) const {
  require_same(q);
  if (q.is_zero()) throw ZeroPolynomial("division by zero");
  const Context& ctx = *ctx_;
  const std::size_t n = ctx.size();
  if (is_zero()) return Poly(ctx_);

  using LMap = std::map<Exponents, Rational, detail::LexGreater>;
  auto to_map = [&](const Poly& p, Exponents& shift) {
    LMap m;
    shift.assign(n, 0);
    bool first = true;
    for (const auto& t : p.terms_) {
      Exponents e = detail::to_laurent(ctx, t.exp);
      for (std::size_t v = 0; v < n; ++v) shift[v] = first ? e[v] : std::min(shift[v], e[v]);
      first = false;
      m.emplace(std::move(e), t.coef);
    }
    LMap out;
    for (auto& [e, c] : m) {
      Exponents s = e;
      for (std::size_t v = 0; v < n; ++v) s[v] -= shift[v];
      out.emplace(std::move(s), c);
    }
    return out;
  };

  Exponents sp, sq;
  LMap num = to_map(*this, sp);
  LMap den = to_map(q, sq);
  const auto& [lq, lc] = *den.begin();
  LMap quot;
  while (!num.empty()) {
    const auto [lp, pc] = *num.begin();
    Exponents d(n);
    for (std::size_t v = 0; v < n; ++v) {
      d[v] = lp[v] - lq[v];
      if (d[v] < 0) {
        Exponents back = lp;
        for (std::size_t w = 0; w < n; ++w) back[w] += sp[w];
        detail::from_laurent(ctx, back);
        throw NotDivisible("exact division failed",
                           "remainder term " + monomial_str(ctx, back) + " of " + str() +
                               " is not divisible by the leading term of " + q.str());
      }
    }
    Rational c = pc / lc;
    for (const auto& [e, qc] : den) {
      Exponents s = e;
      for (std::size_t v = 0; v < n; ++v) s[v] += d[v];
      auto [it, fresh] = num.try_emplace(s, 0);
      it->second -= c * qc;
      if (it->second == 0) num.erase(it);
    }
    quot.emplace(std::move(d), c);
  }

  std::vector<Term> terms;
  for (auto& [e, c] : quot) {
    Exponents r = e;
    for (std::size_t v = 0; v < n; ++v) r[v] += sp[v] - sq[v];
    Exponents shown = r;
    if (!detail::from_laurent(ctx, r)) {
      throw NotDivisible("quotient leaves the ring",
                         "quotient needs " + monomial_str(ctx, shown) + " which has a negative exponent "
                                                                          "on a non-invertible variable");
    }
    terms.push_back({std::move(r), c});
  }
  return from_terms(ctx_, std::move(terms));
}

// ---------------------------------------------------------------------------
// Substitution

inline Poly Poly::substitute(const std::map<std::string, Poly>& assignment,
                             const ContextPtr& target) const {
  const Context& src = *ctx_;
  for (const auto& [name, img] : assignment) {
    src.id(name);
    if (!img.context()->same_as(*target))
      throw ContextMismatch("assigned value for " + name + " lives in another context");
  }
  // Relation check: both coordinates of a point assigned.
  for (int s = 0; s < src.pair_count(); ++s) {
    const std::string& xn = src.name(src.x_var(s));
    const std::string& yn = src.name(src.y_var(s));
    auto xi = assignment.find(xn), yi = assignment.find(yn);
    if (xi == assignment.end() || yi == assignment.end()) continue;
    const std::string& tn = src.name(src.t());
    auto ti = assignment.find(tn);
    Poly timg = ti != assignment.end() ? ti->second : Poly::variable(target, tn);
    if (!(xi->second * yi->second == timg))
      throw RelationViolated("assignment sends " + xn + "*" + yn + " to " +
                             (xi->second * yi->second).str() + " but t to " + timg.str());
  }

  const std::size_t n = src.size();
  std::vector<Poly> image(n), inverse(n);
  std::vector<bool> have_inverse(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    const std::string& name = src.name(static_cast<int>(v));
    auto it = assignment.find(name);
    image[v] = it != assignment.end() ? it->second : Poly::variable(target, name);
  }
  auto inv = [&](std::size_t v) -> const Poly& {
    if (!have_inverse[v]) {
      const Poly& p = image[v];
      if (!p.is_monomial())
        throw NegativeExponentNotLocalized("image of " + src.name(static_cast<int>(v)) +
                                           " is not a unit: " + p.str());
      Exponents e = p.leading().exp;
      for (auto& x : e) x = -x;
      inverse[v] = Poly::monomial(target, std::move(e), 1 / p.leading().coef);
      have_inverse[v] = true;
    }
    return inverse[v];
  };

  std::map<std::pair<std::size_t, int>, Poly> powers;
  auto power = [&](std::size_t v, int k) -> const Poly& {
    auto key = std::make_pair(v, k);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    Poly p = k >= 0 ? image[v].pow(static_cast<unsigned>(k)) : inv(v).pow(static_cast<unsigned>(-k));
    return powers.emplace(key, std::move(p)).first->second;
  };

  Poly out(target);
  for (const auto& t : terms_) {
    Poly acc = Poly::constant(target, t.coef);
    for (std::size_t v = 0; v < n && !acc.is_zero(); ++v)
      if (t.exp[v] != 0) acc = acc * power(v, t.exp[v]);
    out += acc;
  }
  return out;
}

}  // namespace nodehilb
