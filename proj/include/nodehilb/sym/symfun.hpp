#pragma once

// Elementary symmetric functions of the point coordinates, the averaging
// operator over the diagonal permutation action, and the reduction of an
// invariant polynomial to a polynomial in the sigma symbols and t.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nodehilb/report.hpp"
#include "nodehilb/ring/poly.hpp"

namespace nodehilb {

enum class Axis { x, y };

inline std::string sigma_name(Axis a, int j) { return (a == Axis::x ? "sx" : "sy") + std::to_string(j); }

/// Plain ring on sx1..sxm, sy1..sym, t.
inline ContextPtr sigma_context(int m, const std::vector<std::string>& extra = {}) {
  Registry reg;
  for (int j = 1; j <= m; ++j) reg.add(sigma_name(Axis::x, j), VarKind::sigma, j);
  for (int j = 1; j <= m; ++j) reg.add(sigma_name(Axis::y, j), VarKind::sigma, j);
  reg.add("t", VarKind::t);
  for (const auto& e : extra) reg.add(e);
  return Context::create(std::move(reg));
}

/// Elementary symmetric polynomial of degree j in the x (or y) coordinates.
inline Poly elem_sym(Axis axis, int j, const ContextPtr& ctx) {
  const int m = ctx->pair_count();
  if (j < 0 || j > m) throw IndexOutOfRange("elementary symmetric index " + std::to_string(j) + " outside [0," +
                                            std::to_string(m) + "]");
  std::vector<Term> terms;
  std::vector<int> pick(m, 0);
  std::fill(pick.end() - j, pick.end(), 1);
  do {
    Exponents e(ctx->size(), 0);
    for (int s = 0; s < m; ++s)
      if (pick[s]) e[axis == Axis::x ? ctx->x_var(s) : ctx->y_var(s)] = 1;
    terms.push_back({e, 1});
  } while (std::next_permutation(pick.begin(), pick.end()));
  return Poly::from_terms(ctx, std::move(terms));
}

namespace detail {

inline void require_point_variables(const Poly& p) {
  const Context& c = *p.context();
  for (const auto& t : p.terms())
    for (std::size_t v = 0; v < t.exp.size(); ++v)
      if (t.exp[v] != 0 && c.kind(static_cast<int>(v)) != VarKind::x && c.kind(static_cast<int>(v)) != VarKind::y &&
          c.kind(static_cast<int>(v)) != VarKind::t)
        throw ForeignVariables("variable " + c.name(static_cast<int>(v)) + " is not a point coordinate or t");
}

/// Applies the slot permutation perm (slot s moves to perm[s]) to a monomial.
inline Exponents permute_exponents(const Context& c, const Exponents& e, const std::vector<int>& perm) {
  Exponents out = e;
  for (int s = 0; s < c.pair_count(); ++s) {
    out[c.x_var(perm[s])] = e[c.x_var(s)];
    out[c.y_var(perm[s])] = e[c.y_var(s)];
  }
  return out;
}

inline Poly permute(const Poly& p, const std::vector<int>& perm) {
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back({permute_exponents(*p.context(), t.exp, perm), t.coef});
  return Poly::from_terms(p.context(), std::move(terms));
}

}  // namespace detail

/// Average over all m! simultaneous permutations of the points.
inline Poly symmetrize(const Poly& p) {
  detail::require_point_variables(p);
  const int m = p.context()->pair_count();
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  Poly acc(p.context());
  Integer count = 0;
  do {
    acc += detail::permute(p, perm);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc * frac(1, count);
}

/// Invariance under the adjacent transpositions (which generate the group).
inline bool is_invariant(const Poly& p) {
  detail::require_point_variables(p);
  const int m = p.context()->pair_count();
  for (int s = 0; s + 1 < m; ++s) {
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[s], perm[s + 1]);
    if (!(detail::permute(p, perm) == p)) return false;
  }
  return true;
}

/// A polynomial in the sigma symbols plus the point polynomial it evaluates to.
struct SigmaExpr {
  Poly expr;     // in sigma_context(m)
  Poly witness;  // in the point context
};

/// Sends sx_j, sy_j to the elementary symmetric functions of `points`.
inline Poly evaluate_sigma(const Poly& expr, const ContextPtr& points) {
  const int m = points->pair_count();
  std::map<std::string, Poly> a;
  for (int j = 1; j <= m; ++j) {
    a.emplace(sigma_name(Axis::x, j), elem_sym(Axis::x, j, points));
    a.emplace(sigma_name(Axis::y, j), elem_sym(Axis::y, j, points));
  }
  for (std::size_t v = 0; v < expr.context()->size(); ++v) {
    const std::string& n = expr.context()->name(static_cast<int>(v));
    if (!a.contains(n) && !points->find(n)) throw UnknownVariable("cannot evaluate symbol " + n);
  }
  return expr.substitute(a, points);
}

namespace detail {

using PairPattern = std::vector<std::pair<int, int>>;  // sorted (x-exp, y-exp) per point

class SigmaReducer {
 public:
  SigmaReducer(ContextPtr points, int depth_limit)
      : pts_(std::move(points)), sig_(sigma_context(pts_->pair_count())), limit_(depth_limit) {}

  const ContextPtr& sigma_ctx() const { return sig_; }

  Poly express(const Poly& p, int depth) {
    if (depth > limit_) throw RecursionDepthExceeded("sigma reduction exceeded depth " + std::to_string(limit_));
    const Context& c = *pts_;
    std::map<std::pair<PairPattern, int>, Rational> orbits;
    for (const auto& t : p.terms()) {
      PairPattern pat;
      for (int s = 0; s < c.pair_count(); ++s) pat.emplace_back(t.exp[c.x_var(s)], t.exp[c.y_var(s)]);
      std::sort(pat.begin(), pat.end());
      orbits.try_emplace({pat, t.exp[c.t()]}, t.coef);
    }
    Poly out(sig_);
    Poly t = Poly::variable(sig_, "t");
    for (const auto& [key, coef] : orbits) out += coef * t.pow(key.second) * orbit(key.first, depth);
    return out;
  }

  /// Sum of the distinct monomials in the orbit of a pattern.
  Poly orbit_sum(PairPattern pat) const {
    const Context& c = *pts_;
    std::sort(pat.begin(), pat.end());
    std::vector<Term> terms;
    do {
      Exponents e(c.size(), 0);
      for (int s = 0; s < c.pair_count(); ++s) {
        e[c.x_var(s)] = pat[s].first;
        e[c.y_var(s)] = pat[s].second;
      }
      terms.push_back({e, 1});
    } while (std::next_permutation(pat.begin(), pat.end()));
    return Poly::from_terms(pts_, std::move(terms));
  }

 private:
  Poly orbit(const PairPattern& pat, int depth) {
    auto it = memo_.find(pat);
    if (it != memo_.end()) return it->second;
    bool has_x = false, has_y = false;
    for (const auto& [a, b] : pat) {
      has_x |= a > 0;
      has_y |= b > 0;
    }
    Poly result(sig_);
    if (!has_x || !has_y) {
      result = pure(orbit_sum(pat), has_y ? Axis::y : Axis::x);
    } else {
      PairPattern px, py;
      for (const auto& [a, b] : pat) {
        px.emplace_back(a, 0);
        py.emplace_back(0, b);
      }
      Poly mx = orbit_sum(px), my = orbit_sum(py);
      Poly correction = (mx * my - orbit_sum(pat)).exact_div(Poly::variable(pts_, "t"));
      result = pure(mx, Axis::x) * pure(my, Axis::y) - Poly::variable(sig_, "t") * express(correction, depth + 1);
    }
    memo_.emplace(pat, result);
    return result;
  }

  /// Symmetric polynomial in one alphabet, via lex-leading-term reduction.
  Poly pure(Poly q, Axis axis) {
    const Context& c = *pts_;
    const int m = c.pair_count();
    Poly out(sig_);
    std::vector<Poly> sigmas;
    for (int j = 0; j <= m; ++j) sigmas.push_back(elem_sym(axis, j, pts_));
    auto var = [&](int s) { return axis == Axis::x ? c.x_var(s) : c.y_var(s); };
    while (!q.is_zero()) {
      const Term* lead = &q.terms().front();
      for (const auto& t : q.terms()) {
        for (int s = 0; s < m; ++s) {
          int a = t.exp[var(s)], b = lead->exp[var(s)];
          if (a != b) {
            if (a > b) lead = &t;
            break;
          }
        }
      }
      std::vector<int> lam(m + 1, 0);
      for (int s = 0; s < m; ++s) lam[s] = lead->exp[var(s)];
      Rational coef = lead->coef;
      Poly evaluated = Poly::constant(pts_, coef);
      Poly symbolic = Poly::constant(sig_, coef);
      for (int k = 1; k <= m; ++k) {
        int power = lam[k - 1] - lam[k];
        if (power < 0) throw NotInvariant("polynomial is not symmetric in one alphabet");
        if (power == 0) continue;
        evaluated *= sigmas[k].pow(power);
        symbolic *= Poly::variable(sig_, sigma_name(axis, k)).pow(power);
      }
      q -= evaluated;
      out += symbolic;
    }
    return out;
  }

  ContextPtr pts_, sig_;
  int limit_;
  std::map<PairPattern, Poly> memo_;
};

}  // namespace detail

/// Writes an invariant polynomial in terms of sx_j, sy_j and t.
inline SigmaExpr sigma_express(const Poly& p, int depth_limit = 64) {
  detail::require_point_variables(p);
  if (!is_invariant(p)) throw NotInvariant("polynomial is not invariant under permuting the points");
  if (p.context()->any_localized()) throw PreconditionFailed("sigma reduction needs an unlocalized ring");
  detail::SigmaReducer red(p.context(), depth_limit);
  Poly e = red.express(p, 0);
  Poly back = evaluate_sigma(e, p.context());
  if (!(back == p)) throw Error("sigma reduction produced a wrong witness: " + back.str());
  return {e, p};
}

/// Constant c in R(x^I y^J) - c R(x^I) R(y^J) = t F, from orbit sizes.
inline Rational recursion_constant(const ContextPtr& points, const Exponents& xpart, const Exponents& ypart) {
  detail::SigmaReducer red(points, 1);
  const Context& c = *points;
  auto orbit_size = [&](const Exponents& e) {
    detail::PairPattern pat;
    for (int s = 0; s < c.pair_count(); ++s) pat.emplace_back(e[c.x_var(s)], e[c.y_var(s)]);
    return static_cast<long>(red.orbit_sum(pat).size());
  };
  Exponents both = xpart;
  for (std::size_t v = 0; v < both.size(); ++v) both[v] += ypart[v];
  return frac(orbit_size(xpart) * orbit_size(ypart), orbit_size(both));
}

inline const Anchor kSigmaRelationAnchor{"symmetric-function relations on the relative product",
                                         "s^y_m s^x_j = t^j s^y_{m-j},  s^x_m s^y_j = t^j s^x_{m-j}"};
inline const Anchor kSigmaConsequenceAnchor{
    "t-weighted consequences of the symmetric-function relations",
    "t^{m-i} s^y_{m-j} = t^{m-i-j} s^x_j s^y_m,  t^{m-i} s^x_{m-j} = t^{m-i-j} s^y_j s^x_m"};

/// Every instance of the symmetric-function relations at m points.
inline CheckReport verify_sigma_relations(int m) {
  if (m < 1) throw IndexOutOfRange("m must be positive");
  auto ctx = points_context(m);
  Poly t = Poly::variable(ctx, "t");
  std::vector<Poly> sx, sy;
  for (int j = 0; j <= m; ++j) {
    sx.push_back(elem_sym(Axis::x, j, ctx));
    sy.push_back(elem_sym(Axis::y, j, ctx));
  }
  CheckReport out;
  auto record = [&](std::string id, const Anchor& a, const Poly& lhs, const Poly& rhs) {
    Json d;
    d["lhs_terms"] = lhs.size();
    d["difference"] = (lhs - rhs).str();
    out.push_back(make_check(std::move(id), a, lhs == rhs, std::move(d)));
  };
  const std::string base = "sigma/m" + std::to_string(m);
  for (int j = 0; j <= m; ++j) {
    record(base + "/ymx/j" + std::to_string(j), kSigmaRelationAnchor, sy[m] * sx[j], t.pow(j) * sy[m - j]);
    record(base + "/xmy/j" + std::to_string(j), kSigmaRelationAnchor, sx[m] * sy[j], t.pow(j) * sx[m - j]);
  }
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i + j <= m; ++i) {
      std::string id = "/i" + std::to_string(i) + "/j" + std::to_string(j);
      record(base + "/weighted-y" + id, kSigmaConsequenceAnchor, t.pow(m - i) * sy[m - j],
             t.pow(m - i - j) * sx[j] * sy[m]);
      record(base + "/weighted-x" + id, kSigmaConsequenceAnchor, t.pow(m - i) * sx[m - j],
             t.pow(m - i - j) * sy[j] * sx[m]);
    }
  }
  return out;
}

inline const Anchor kSigmaExpressAnchor{"invariants are polynomials in the symmetric functions",
                                        "C[x, y, t]^{S_m} / (x_i y_i - t) is generated by s^x_j, s^y_j, t"};

/// Random polynomial in x_1..x_m, y_1..y_m, t with `terms` terms of degree <= maxdeg.
inline Poly random_point_poly(const ContextPtr& ctx, std::mt19937& rng, int terms, int maxdeg) {
  const int m = ctx->pair_count();
  std::uniform_int_distribution<int> coef(-4, 4), deg(0, maxdeg), var(0, 2 * m);
  std::vector<Term> raw;
  for (int i = 0; i < terms; ++i) {
    Exponents e(ctx->size(), 0);
    int d = deg(rng);
    for (int k = 0; k < d; ++k) e[var(rng)]++;
    raw.push_back({e, coef(rng)});
  }
  return Poly::from_terms(ctx, raw);
}

/// Symmetrizes `count` random polynomials of degree <= 6, expresses each in
/// the sigma's and evaluates back.
inline CheckReport sigma_express_check(int m, int count, unsigned seed) {
  auto ctx = points_context(m);
  std::mt19937 rng(seed + 7919u * static_cast<unsigned>(m));
  CheckReport out;
  for (int s = 0; s < count; ++s) {
    Poly p = symmetrize(random_point_poly(ctx, rng, 3, 6));
    Json d;
    d["invariant_terms"] = p.size();
    bool ok = false;
    try {
      SigmaExpr e = sigma_express(p);
      d["expression_terms"] = e.expr.size();
      ok = evaluate_sigma(e.expr, ctx) == p;
    } catch (const Error& e) {
      d["error"] = e.what();
    }
    out.push_back(make_check("sigma/m" + std::to_string(m) + "/express/s" + std::to_string(s), kSigmaExpressAnchor,
                             ok, d));
  }
  return out;
}

}  // namespace nodehilb
