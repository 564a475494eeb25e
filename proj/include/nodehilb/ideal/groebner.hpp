#pragma once

// Buchberger's algorithm over Q for ideals in plain polynomial rings, with the
// Gebauer-Moeller pair criteria, sugar selection and a wall-clock deadline.

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nodehilb/errors.hpp"
#include "nodehilb/ring/poly.hpp"

namespace nodehilb {

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

inline Deadline deadline_after(double seconds) {
  if (seconds <= 0) return std::nullopt;
  return Clock::now() + std::chrono::milliseconds(static_cast<long>(seconds * 1000));
}

class MonomialOrder {
 public:
  enum class Kind { grlex, grevlex, lex };

  MonomialOrder() = default;
  explicit MonomialOrder(Kind k) : kind_(k) {}

  /// Block order: variables flagged in `first` dominate, grevlex inside blocks.
  static MonomialOrder elimination(std::vector<bool> first) {
    MonomialOrder o(Kind::grevlex);
    o.block_ = std::move(first);
    return o;
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<bool>& block() const noexcept { return block_; }

  bool greater(const Exponents& a, const Exponents& b) const {
    if (!block_.empty()) {
      int c = compare_within(a, b, true);
      if (c != 0) return c > 0;
      return compare_within(a, b, false) > 0;
    }
    return compare(a, b) > 0;
  }

  std::string name() const {
    std::string n = kind_ == Kind::grlex ? "grlex" : kind_ == Kind::grevlex ? "grevlex" : "lex";
    if (!block_.empty()) {
      n += "/block:";
      for (bool b : block_) n += b ? '1' : '0';
    }
    return n;
  }

 private:
  int compare(const Exponents& a, const Exponents& b) const {
    const std::size_t n = a.size();
    switch (kind_) {
      case Kind::lex:
        for (std::size_t i = 0; i < n; ++i)
          if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
        return 0;
      case Kind::grlex: {
        long da = total_degree(a), db = total_degree(b);
        if (da != db) return da > db ? 1 : -1;
        for (std::size_t i = 0; i < n; ++i)
          if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
        return 0;
      }
      case Kind::grevlex: {
        long da = total_degree(a), db = total_degree(b);
        if (da != db) return da > db ? 1 : -1;
        for (std::size_t i = n; i-- > 0;)
          if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
        return 0;
      }
    }
    return 0;
  }

  int compare_within(const Exponents& a, const Exponents& b, bool in_first) const {
    long da = 0, db = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (block_[i] == in_first) {
        da += a[i];
        db += b[i];
      }
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = a.size(); i-- > 0;)
      if (block_[i] == in_first && a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    return 0;
  }

  Kind kind_ = Kind::grevlex;
  std::vector<bool> block_;
};

/// Storage hook for computed bases, keyed by a canonical description of the
/// input. Implementations must be safe to call from several threads.
class BasisCache {
 public:
  virtual ~BasisCache() = default;
  virtual std::optional<std::vector<std::string>> load(const std::string& key) = 0;
  virtual void store(const std::string& key, const std::vector<std::string>& basis) = 0;
};

namespace detail {

struct GTerm {
  Exponents e;
  Rational c;
};

struct GPoly {
  std::vector<GTerm> terms;  // descending in the active order
  long sugar = 0;
  bool zero() const { return terms.empty(); }
  const Exponents& lm() const { return terms.front().e; }
};

inline bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Exponents lcm(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline bool coprime(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

inline void check_deadline(const Deadline& d) {
  if (d && Clock::now() > *d) throw Timeout("Groebner computation exceeded its time budget");
}

class Engine {
 public:
  Engine(MonomialOrder order, Deadline deadline) : order_(std::move(order)), deadline_(deadline) {}

  GPoly from_poly(const Poly& p) const {
    GPoly g;
    for (const auto& t : p.terms()) g.terms.push_back({t.exp, t.coef});
    sort(g);
    g.sugar = p.total_degree();
    return g;
  }

  Poly to_poly(const ContextPtr& ctx, const GPoly& g) const {
    std::vector<Term> t;
    t.reserve(g.terms.size());
    for (const auto& x : g.terms) t.push_back({x.e, x.c});
    return Poly::from_terms(ctx, std::move(t));
  }

  void sort(GPoly& g) const {
    std::sort(g.terms.begin(), g.terms.end(),
              [&](const GTerm& a, const GTerm& b) { return order_.greater(a.e, b.e); });
  }

  static void make_monic(GPoly& g) {
    if (g.zero()) return;
    Rational inv = 1 / g.terms.front().c;
    if (inv == 1) return;
    for (auto& t : g.terms) t.c *= inv;
  }

  /// Full reduction of p by the polynomials `basis[idx]` for idx in `active`.
  GPoly reduce(const GPoly& p, const std::vector<GPoly>& basis, const std::vector<std::size_t>& active,
               bool full = true) const {
    auto cmp = [&](const Exponents& a, const Exponents& b) { return order_.greater(a, b); };
    std::map<Exponents, Rational, decltype(cmp)> acc(cmp);
    for (const auto& t : p.terms) acc.emplace(t.e, t.c);
    GPoly out;
    out.sugar = p.sugar;
    long steps = 0;
    while (!acc.empty()) {
      if ((++steps & 255) == 0) check_deadline(deadline_);
      auto it = acc.begin();
      const GPoly* div = nullptr;
      for (std::size_t k : active) {
        if (divides(basis[k].lm(), it->first)) {
          div = &basis[k];
          break;
        }
      }
      if (!div) {
        out.terms.push_back({it->first, it->second});
        acc.erase(it);
        if (!full) {
          for (auto& [e, c] : acc) out.terms.push_back({e, c});
          break;
        }
        continue;
      }
      Exponents shift = it->first;
      for (std::size_t i = 0; i < shift.size(); ++i) shift[i] -= div->lm()[i];
      Rational f = it->second / div->terms.front().c;
      out.sugar = std::max(out.sugar, div->sugar + total_degree(shift));
      acc.erase(it);
      Exponents e(shift.size());
      for (std::size_t j = 1; j < div->terms.size(); ++j) {
        const auto& t = div->terms[j];
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = t.e[i] + shift[i];
        auto [pos, fresh] = acc.try_emplace(e, 0);
        pos->second -= f * t.c;
        if (pos->second == 0) acc.erase(pos);
      }
    }
    return out;
  }

  GPoly spoly(const GPoly& f, const GPoly& g) const {
    Exponents l = lcm(f.lm(), g.lm());
    GPoly r;
    auto cmp = [&](const Exponents& a, const Exponents& b) { return order_.greater(a, b); };
    std::map<Exponents, Rational, decltype(cmp)> acc(cmp);
    auto add = [&](const GPoly& p, const Rational& scale) {
      Exponents shift = l;
      for (std::size_t i = 0; i < l.size(); ++i) shift[i] -= p.lm()[i];
      for (std::size_t j = 1; j < p.terms.size(); ++j) {
        Exponents e = p.terms[j].e;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += shift[i];
        auto [pos, fresh] = acc.try_emplace(std::move(e), 0);
        pos->second += scale * p.terms[j].c;
        if (pos->second == 0) acc.erase(pos);
      }
      return total_degree(shift) + p.sugar;
    };
    long s1 = add(f, 1 / f.terms.front().c);
    long s2 = add(g, -1 / g.terms.front().c);
    for (auto& [e, c] : acc) r.terms.push_back({e, c});
    r.sugar = std::max(s1, s2);
    return r;
  }

  /// Reduced Groebner basis of the given generators.
  std::vector<GPoly> run(std::vector<GPoly> gens) {
    std::vector<GPoly> polys;
    std::vector<std::size_t> active;
    struct Pair {
      std::size_t i, j;
      Exponents lcm;
      long sugar;
    };
    std::vector<Pair> pairs;

    auto update = [&](std::size_t h) {
      const Exponents& lh = polys[h].lm();
      std::vector<Pair> c;
      for (std::size_t g : active) {
        Exponents l = lcm(lh, polys[g].lm());
        long s = std::max(polys[h].sugar + total_degree(l) - total_degree(lh),
                          polys[g].sugar + total_degree(l) - total_degree(polys[g].lm()));
        c.push_back({g, h, l, s});
      }
      // Gebauer-Moeller: keep (h,g) only if coprime or no other pair's lcm divides it.
      std::vector<Pair> d;
      for (std::size_t a = 0; a < c.size(); ++a) {
        const auto& p = c[a];
        bool keep = coprime(lh, polys[p.i].lm());
        if (!keep) {
          keep = true;
          for (std::size_t b = a + 1; b < c.size() && keep; ++b)
            if (divides(c[b].lcm, p.lcm)) keep = false;
          for (std::size_t b = 0; b < d.size() && keep; ++b)
            if (divides(d[b].lcm, p.lcm)) keep = false;
        }
        if (keep) d.push_back(p);
      }
      std::vector<Pair> e;
      for (auto& p : d)
        if (!coprime(lh, polys[p.i].lm())) e.push_back(std::move(p));
      std::vector<Pair> kept;
      for (auto& p : pairs) {
        bool drop = divides(lh, p.lcm) && lcm(polys[p.i].lm(), lh) != p.lcm &&
                    lcm(polys[p.j].lm(), lh) != p.lcm;
        if (!drop) kept.push_back(std::move(p));
      }
      for (auto& p : e) kept.push_back(std::move(p));
      pairs = std::move(kept);
      std::vector<std::size_t> next;
      for (std::size_t g : active)
        if (!divides(lh, polys[g].lm())) next.push_back(g);
      next.push_back(h);
      active = std::move(next);
    };

    std::sort(gens.begin(), gens.end(), [&](const GPoly& a, const GPoly& b) {
      if (a.zero() != b.zero()) return b.zero();
      if (a.zero()) return false;
      return order_.greater(b.lm(), a.lm());
    });
    for (auto& g : gens) {
      if (g.zero()) continue;
      GPoly r = reduce(g, polys, active);
      if (r.zero()) continue;
      make_monic(r);
      polys.push_back(std::move(r));
      update(polys.size() - 1);
    }

    while (!pairs.empty()) {
      check_deadline(deadline_);
      auto best = std::min_element(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
        if (a.sugar != b.sugar) return a.sugar < b.sugar;
        return order_.greater(b.lcm, a.lcm);
      });
      Pair p = *best;
      pairs.erase(best);
      GPoly s = spoly(polys[p.i], polys[p.j]);
      GPoly r = reduce(s, polys, active);
      if (r.zero()) continue;
      make_monic(r);
      polys.push_back(std::move(r));
      update(polys.size() - 1);
    }

    // Inter-reduce the minimal basis.
    std::vector<GPoly> out;
    for (std::size_t k = 0; k < active.size(); ++k) {
      std::vector<std::size_t> others;
      for (std::size_t l = 0; l < active.size(); ++l)
        if (l != k) others.push_back(active[l]);
      GPoly head;
      head.terms.push_back(polys[active[k]].terms.front());
      GPoly tail;
      tail.terms.assign(polys[active[k]].terms.begin() + 1, polys[active[k]].terms.end());
      GPoly rt = reduce(tail, polys, others);
      head.terms.insert(head.terms.end(), rt.terms.begin(), rt.terms.end());
      head.sugar = polys[active[k]].sugar;
      make_monic(head);
      out.push_back(std::move(head));
    }
    std::sort(out.begin(), out.end(), [&](const GPoly& a, const GPoly& b) { return order_.greater(a.lm(), b.lm()); });
    return out;
  }

  const MonomialOrder& order() const noexcept { return order_; }

 private:
  MonomialOrder order_;
  Deadline deadline_;
};

}  // namespace detail

inline void require_plain(const Poly& p) {
  if (!p.context()->plain())
    throw PreconditionFailed("Groebner computations need a plain polynomial ring");
}

/// A reduced Groebner basis together with its order.
class GroebnerBasis {
 public:
  GroebnerBasis(ContextPtr ctx, MonomialOrder order, std::vector<Poly> basis)
      : ctx_(std::move(ctx)), order_(std::move(order)), basis_(std::move(basis)) {
    detail::Engine eng(order_, std::nullopt);
    for (const auto& b : basis_) g_.push_back(eng.from_poly(b));
    for (std::size_t i = 0; i < g_.size(); ++i) all_.push_back(i);
  }

  const ContextPtr& context() const noexcept { return ctx_; }
  const MonomialOrder& order() const noexcept { return order_; }
  const std::vector<Poly>& basis() const noexcept { return basis_; }
  bool is_unit_ideal() const { return basis_.size() == 1 && basis_[0].is_constant() && !basis_[0].is_zero(); }

  Poly normal_form(const Poly& p, const Deadline& deadline = std::nullopt) const {
    if (!p.context()->same_as(*ctx_)) throw ContextMismatch("normal form in a different context");
    detail::Engine eng(order_, deadline);
    return eng.to_poly(ctx_, eng.reduce(eng.from_poly(p), g_, all_));
  }

  bool contains(const Poly& p) const { return normal_form(p).is_zero(); }

  /// First generator (index) not in the ideal, if any.
  std::optional<std::size_t> first_not_contained(const std::vector<Poly>& gens) const {
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (!contains(gens[i])) return i;
    return std::nullopt;
  }

  std::vector<Exponents> leading_monomials() const {
    std::vector<Exponents> out;
    for (const auto& g : g_) out.push_back(g.lm());
    return out;
  }

  /// Monomials outside the leading-term ideal, or nullopt if more than `limit`.
  std::optional<std::vector<Exponents>> standard_monomials(std::size_t limit = 10000) const {
    auto lms = leading_monomials();
    auto standard = [&](const Exponents& e) {
      return std::none_of(lms.begin(), lms.end(), [&](const Exponents& l) { return detail::divides(l, e); });
    };
    std::set<Exponents> seen;
    std::deque<Exponents> queue;
    Exponents one(ctx_->size(), 0);
    if (!standard(one)) return std::vector<Exponents>{};
    queue.push_back(one);
    seen.insert(one);
    while (!queue.empty()) {
      Exponents e = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < e.size(); ++v) {
        Exponents f = e;
        ++f[v];
        if (seen.contains(f) || !standard(f)) continue;
        seen.insert(f);
        if (seen.size() > limit) return std::nullopt;
        queue.push_back(f);
      }
    }
    std::vector<Exponents> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), GrlexGreater{});
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  ContextPtr ctx_;
  MonomialOrder order_;
  std::vector<Poly> basis_;
  std::vector<detail::GPoly> g_;
  std::vector<std::size_t> all_;
};

inline std::string cache_key(const std::string& version, const ContextPtr& ctx, const MonomialOrder& order,
                             const std::vector<Poly>& gens) {
  std::string key = "engine=" + version + "\norder=" + order.name() + "\nring=" + ctx->fingerprint() + "\n";
  for (const auto& g : gens) key += g.str() + "\n";
  return key;
}

inline const char* kEngineVersion = "1.0.0";

inline GroebnerBasis groebner(const std::vector<Poly>& gens, const ContextPtr& ctx, const MonomialOrder& order,
                              const Deadline& deadline = std::nullopt, BasisCache* cache = nullptr) {
  for (const auto& g : gens) {
    require_plain(g);
    if (!g.context()->same_as(*ctx)) throw ContextMismatch("generator in a different context");
  }
  std::string key;
  if (cache) {
    key = cache_key(kEngineVersion, ctx, order, gens);
    if (auto hit = cache->load(key)) {
      std::vector<Poly> basis;
      for (const auto& s : *hit) basis.push_back(Poly::parse(ctx, s));
      return GroebnerBasis(ctx, order, std::move(basis));
    }
  }
  detail::Engine eng(order, deadline);
  std::vector<detail::GPoly> in;
  for (const auto& g : gens) in.push_back(eng.from_poly(g));
  auto out = eng.run(std::move(in));
  std::vector<Poly> basis;
  for (const auto& g : out) basis.push_back(eng.to_poly(ctx, g));
  if (cache) {
    std::vector<std::string> ser;
    for (const auto& b : basis) ser.push_back(b.str());
    cache->store(key, ser);
  }
  return GroebnerBasis(ctx, order, std::move(basis));
}

/// Generators of I intersected with the subring free of `vars`.
inline std::vector<Poly> eliminate(const std::vector<Poly>& gens, const ContextPtr& ctx,
                                   const std::vector<std::string>& vars, const Deadline& deadline = std::nullopt,
                                   BasisCache* cache = nullptr) {
  std::vector<bool> block(ctx->size(), false);
  for (const auto& v : vars) block[ctx->id(v)] = true;
  auto gb = groebner(gens, ctx, MonomialOrder::elimination(block), deadline, cache);
  std::vector<Poly> out;
  for (const auto& g : gb.basis()) {
    bool free = std::none_of(vars.begin(), vars.end(), [&](const std::string& v) { return g.uses(v); });
    if (free) out.push_back(g);
  }
  return out;
}

/// Generators of I and J intersected, via an auxiliary tag variable that
/// must exist in the context and be unused by the inputs.
inline std::vector<Poly> intersect(const std::vector<Poly>& i, const std::vector<Poly>& j, const ContextPtr& ctx,
                                   const std::string& tag, const Deadline& deadline = std::nullopt,
                                   BasisCache* cache = nullptr) {
  Poly s = Poly::variable(ctx, tag);
  Poly one_minus = Poly::constant(ctx, 1) - s;
  std::vector<Poly> gens;
  for (const auto& f : i) gens.push_back(s * f);
  for (const auto& g : j) gens.push_back(one_minus * g);
  return eliminate(gens, ctx, {tag}, deadline, cache);
}

/// Both-way membership of generator lists under already computed bases.
inline bool same_ideal(const GroebnerBasis& a, const std::vector<Poly>& a_gens, const GroebnerBasis& b,
                       const std::vector<Poly>& b_gens) {
  return !a.first_not_contained(b_gens) && !b.first_not_contained(a_gens);
}

}  // namespace nodehilb
