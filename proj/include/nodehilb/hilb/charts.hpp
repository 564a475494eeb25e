#pragma once

// Universal generators F_0..F_m of the local Hilbert scheme model, the
// relations cutting out the parameter space, chart presentations and the
// multiplication matrices on the co-basis 1, x, ..., x^{m-i}, y, ..., y^{i-1}.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nodehilb/ideal/groebner.hpp"
#include "nodehilb/report.hpp"
#include "nodehilb/ring/det.hpp"
#include "nodehilb/ring/poly.hpp"

namespace nodehilb {

inline const Anchor kFGeneratorsAnchor{"universal ideal generators",
                                       "F_i = u_i(x^{m-i} + a_{m-1}x^{m-i-1} + ... + a_i) + "
                                       "v_i(d_{m-i+1}y + ... + d_{m-1}y^{i-1} + y^i)"};
inline const Anchor kFRelationAnchor{"linear relations among the universal generators",
                                     "u_{i-1}F_j = u_j x^{i-1-j} F_{i-1} (j < i-1), v_i F_j = v_j y^{j-i} F_i (j > i)"};
inline const Anchor kCobasisAnchor{"co-basis of the universal quotient on chart U_i", "1, ..., x^{m-i}, y, ..., y^{i-1}"};
inline const Anchor kFlatnessAnchor{"flatness of the universal subscheme", "M_x M_y = M_y M_x = t Id"};
inline const Anchor kCharpolyAnchor{"characteristic polynomials of the multiplication matrices",
                                    "charpoly(M_x) = F_0, charpoly(M_y) = F_m"};
inline const Anchor kConfluenceAnchor{"rewriting by xy -> t, F_{i-1}, F_i", "overlaps reduce to 0 modulo the H-ideal"};

inline std::string var_name(const char* stem, int k) { return stem + std::to_string(k); }

struct UniversalGenerators {
  int m = 0;
  ContextPtr ctx;
  std::vector<Poly> F;  // F[0..m]
};

/// x, y, t, a_0..a_{m-1}, d_0..d_{m-1}, u_1..u_{m-1}, v_1..v_{m-1}; no built-in relations.
inline ContextPtr universal_context(int m) {
  std::vector<std::string> names{"x", "y", "t"};
  for (int k = 0; k < m; ++k) names.push_back(var_name("a", k));
  for (int k = 0; k < m; ++k) names.push_back(var_name("d", k));
  for (int k = 1; k < m; ++k) names.push_back(var_name("u", k));
  for (int k = 1; k < m; ++k) names.push_back(var_name("v", k));
  return plain_context(names);
}

namespace detail {

inline Poly var(const ContextPtr& ctx, const std::string& name, int power = 1) {
  return Poly::variable(ctx, name, power);
}

/// u_k / v_k with the convention u_0 = v_0 = u_m = v_m = 1.
inline Poly chain_var(const ContextPtr& ctx, char stem, int k, int m) {
  if (k <= 0 || k >= m) return Poly::constant(ctx, 1);
  return var(ctx, std::string(1, stem) + std::to_string(k));
}

}  // namespace detail

inline UniversalGenerators f_generators(int m) {
  if (m < 1) throw PreconditionFailed("f_generators needs m >= 1");
  UniversalGenerators g;
  g.m = m;
  g.ctx = universal_context(m);
  const auto& ctx = g.ctx;
  using detail::var;
  Poly f0 = var(ctx, "x", m);
  for (int k = 0; k < m; ++k) f0 = f0 + var(ctx, var_name("a", k)) * var(ctx, "x", k);
  g.F.push_back(f0);
  for (int i = 1; i < m; ++i) {
    Poly xs = var(ctx, "x", m - i);
    for (int k = i; k < m; ++k) xs = xs + var(ctx, var_name("a", k)) * var(ctx, "x", k - i);
    Poly ys = var(ctx, "y", i);
    for (int l = 1; l < i; ++l) ys = ys + var(ctx, var_name("d", m - i + l)) * var(ctx, "y", l);
    g.F.push_back(var(ctx, var_name("u", i)) * xs + var(ctx, var_name("v", i)) * ys);
  }
  Poly fm = var(ctx, "y", m);
  for (int k = 0; k < m; ++k) fm = fm + var(ctx, var_name("d", k)) * var(ctx, "y", k);
  g.F.push_back(fm);
  return g;
}

/// Relations of the parameter space in the universal context: the H-equations,
/// the chain relations v_k u_{k+1} = t u_k v_{k+1}, and xy - t. For m = 1 the
/// parameter space is the surface itself: a_0 d_0 = t.
inline std::vector<Poly> h_generators(int m, const ContextPtr& ctx) {
  using detail::var;
  std::vector<Poly> out;
  Poly t = var(ctx, "t");
  if (m == 1) {
    out.push_back(var(ctx, "a0") * var(ctx, "d0") - t);
  } else {
    out.push_back(var(ctx, "a0") * var(ctx, "u1") - t * var(ctx, "v1"));
    out.push_back(var(ctx, "d0") * var(ctx, var_name("v", m - 1)) - t * var(ctx, var_name("u", m - 1)));
    for (int k = 1; k < m; ++k)
      out.push_back(var(ctx, var_name("a", k)) * var(ctx, var_name("u", k)) -
                    var(ctx, var_name("d", m - k)) * var(ctx, var_name("v", k)));
    for (int k = 1; k + 1 < m; ++k)
      out.push_back(var(ctx, var_name("v", k)) * var(ctx, var_name("u", k + 1)) -
                    t * var(ctx, var_name("u", k)) * var(ctx, var_name("v", k + 1)));
  }
  out.push_back(var(ctx, "x") * var(ctx, "y") - t);
  return out;
}

/// A co-basis element x^p (q = 0) or y^q (p = 0).
struct CobasisMonomial {
  int xpow = 0;
  int ypow = 0;
  std::string str() const {
    if (xpow == 0 && ypow == 0) return "1";
    if (xpow) return xpow == 1 ? "x" : "x^" + std::to_string(xpow);
    return ypow == 1 ? "y" : "y^" + std::to_string(ypow);
  }
};

struct ChartPresentation {
  int m = 0;
  int i = 0;
  ContextPtr ctx;  // x, y, lam, t, a's, d's, v_1..v_{i-1}, u_i..u_{m-1}
  std::vector<Poly> h_ideal;
  std::optional<GroebnerBasis> h_basis;
  std::vector<Poly> F;  // substituted F_0..F_m
  std::vector<CobasisMonomial> cobasis;

  const Poly& f_low() const { return F[i - 1]; }
  const Poly& f_high() const { return F[i]; }
  const GroebnerBasis& basis() const { return *h_basis; }
  Poly normal_form(const Poly& p) const { return h_basis->normal_form(p); }
};

inline ContextPtr chart_context(int m, int i) {
  std::vector<std::string> names{"x", "y", "lam"};
  for (int k = 0; k < m; ++k) names.push_back(var_name("a", k));
  for (int k = 0; k < m; ++k) names.push_back(var_name("d", k));
  for (int k = 1; k < i && k < m; ++k) names.push_back(var_name("v", k));
  for (int k = i; k < m; ++k) names.push_back(var_name("u", k));
  names.push_back("t");
  return plain_context(names);
}

/// u_j = 1 for j < i, v_j = 1 for j >= i.
inline std::map<std::string, Poly> chart_substitution(int m, int i, const ContextPtr& target) {
  std::map<std::string, Poly> s;
  for (int k = 1; k < m; ++k) {
    if (k < i) s.emplace(var_name("u", k), Poly::constant(target, 1));
    else s.emplace(var_name("v", k), Poly::constant(target, 1));
  }
  return s;
}

inline ChartPresentation make_chart(int m, int i, const Deadline& deadline = std::nullopt,
                                   BasisCache* cache = nullptr) {
  if (m < 1 || i < 1 || i > m)
    throw IndexOutOfRange("chart " + std::to_string(i) + " outside [1," + std::to_string(m) + "]");
  ChartPresentation c;
  c.m = m;
  c.i = i;
  c.ctx = chart_context(m, i);
  auto univ = f_generators(m);
  auto subst = chart_substitution(m, i, c.ctx);
  for (const auto& h : h_generators(m, univ.ctx)) {
    Poly r = h.substitute(subst, c.ctx);
    if (!r.is_zero()) c.h_ideal.push_back(r);
  }
  for (const auto& f : univ.F) c.F.push_back(f.substitute(subst, c.ctx));
  c.h_basis = groebner(c.h_ideal, c.ctx, MonomialOrder(MonomialOrder::Kind::grevlex), deadline, cache);
  for (int p = 0; p <= m - i; ++p) c.cobasis.push_back({p, 0});
  for (int q = 1; q < i; ++q) c.cobasis.push_back({0, q});
  return c;
}

/// Rewriting modulo xy -> t, x^{m-i+1} -> -(rest of F_{i-1}), y^i -> -(rest of F_i).
/// Mixed monomials are always removed first.
class ChartReducer {
 public:
  enum class Rule { mixed, x_power, y_power };

  explicit ChartReducer(const ChartPresentation& c, std::size_t step_limit = 100000)
      : c_(c), limit_(step_limit), xv_(c.ctx->id("x")), yv_(c.ctx->id("y")), tv_(c.ctx->id("t")) {}

  std::vector<Rule> applicable(const Exponents& e) const {
    std::vector<Rule> r;
    if (e[xv_] > 0 && e[yv_] > 0) r.push_back(Rule::mixed);
    if (e[xv_] >= c_.m - c_.i + 1) r.push_back(Rule::x_power);
    if (e[yv_] >= c_.i) r.push_back(Rule::y_power);
    return r;
  }

  /// One rewrite of the term (e, coef) by the given rule, as a polynomial.
  Poly rewrite(const Exponents& e, const Rational& coef, Rule rule) const {
    Exponents rest = e;
    switch (rule) {
      case Rule::mixed: {
        int k = std::min(e[xv_], e[yv_]);
        rest[xv_] -= k;
        rest[yv_] -= k;
        rest[tv_] += k;
        return Poly::monomial(c_.ctx, rest, coef);
      }
      case Rule::x_power: {
        rest[xv_] -= c_.m - c_.i + 1;
        Poly lead = Poly::variable(c_.ctx, "x", c_.m - c_.i + 1);
        return Poly::monomial(c_.ctx, rest, coef) * (lead - c_.f_low());
      }
      case Rule::y_power: {
        rest[yv_] -= c_.i;
        Poly lead = Poly::variable(c_.ctx, "y", c_.i);
        return Poly::monomial(c_.ctx, rest, coef) * (lead - c_.f_high());
      }
    }
    return Poly(c_.ctx);
  }

  Poly reduce(Poly p) const {
    std::size_t steps = 0;
    for (;;) {
      std::optional<std::pair<Term, Rule>> pick;
      for (const auto& term : p.terms()) {
        auto rules = applicable(term.exp);
        if (!rules.empty()) {
          pick.emplace(term, rules.front());
          break;
        }
      }
      if (!pick) return p;
      if (++steps > limit_) throw ReductionDiverged("chart rewriting exceeded its step guard");
      const auto& [term, rule] = *pick;
      p = p - Poly::monomial(c_.ctx, term.exp, term.coef) + rewrite(term.exp, term.coef, rule);
    }
  }

  /// Coefficients of a reduced polynomial over the co-basis, normalized modulo H.
  std::vector<Poly> coordinates(const Poly& reduced) const {
    std::vector<std::vector<Term>> parts(c_.cobasis.size());
    for (const auto& term : reduced.terms()) {
      int p = term.exp[xv_], q = term.exp[yv_];
      int slot = -1;
      if (q == 0 && p <= c_.m - c_.i) slot = p;
      else if (p == 0 && q >= 1 && q < c_.i) slot = c_.m - c_.i + q;
      if (slot < 0) throw CobasisNotClosed("monomial x^" + std::to_string(p) + " y^" + std::to_string(q) +
                                           " outside the co-basis on chart " + std::to_string(c_.i));
      Exponents e = term.exp;
      e[xv_] = 0;
      e[yv_] = 0;
      parts[slot].push_back({e, term.coef});
    }
    std::vector<Poly> out;
    for (auto& terms : parts) out.push_back(c_.normal_form(Poly::from_terms(c_.ctx, std::move(terms))));
    return out;
  }

  Poly cobasis_poly(const CobasisMonomial& b) const {
    return Poly::variable(c_.ctx, "x", b.xpow) * Poly::variable(c_.ctx, "y", b.ypow);
  }

 private:
  const ChartPresentation& c_;
  std::size_t limit_;
  int xv_, yv_, tv_;
};

struct MultiplicationPair {
  Matrix mx;
  Matrix my;
};

/// Column c holds the co-basis coordinates of x * b_c (resp. y * b_c).
inline MultiplicationPair multiplication_matrices(const ChartPresentation& c) {
  ChartReducer red(c);
  const std::size_t n = c.cobasis.size();
  MultiplicationPair mp{Matrix(n, std::vector<Poly>(n, Poly(c.ctx))), Matrix(n, std::vector<Poly>(n, Poly(c.ctx)))};
  Poly x = Poly::variable(c.ctx, "x"), y = Poly::variable(c.ctx, "y");
  for (std::size_t col = 0; col < n; ++col) {
    Poly b = red.cobasis_poly(c.cobasis[col]);
    auto cx = red.coordinates(red.reduce(x * b));
    auto cy = red.coordinates(red.reduce(y * b));
    for (std::size_t row = 0; row < n; ++row) {
      mp.mx[row][col] = cx[row];
      mp.my[row][col] = cy[row];
    }
  }
  return mp;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix r(n, std::vector<Poly>(n, Poly(a[0][0].context())));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) r[i][j] = r[i][j] + a[i][k] * b[k][j];
  return r;
}

/// det(lam * Id - M).
inline Poly charpoly(const Matrix& m, const ContextPtr& ctx) {
  const std::size_t n = m.size();
  Matrix a(n, std::vector<Poly>(n, Poly(ctx)));
  Poly lam = Poly::variable(ctx, "lam");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j ? lam : Poly(ctx)) - m[i][j];
  return det(a);
}

/// F_0 (or F_m) with x (or y) renamed to lam.
inline Poly f_in_lambda(const ChartPresentation& c, bool x_side) {
  Poly lam = Poly::variable(c.ctx, "lam");
  Poly r = lam.pow(c.m);
  for (int k = 0; k < c.m; ++k) r = r + Poly::variable(c.ctx, var_name(x_side ? "a" : "d", k)) * lam.pow(k);
  return r;
}

inline std::string chart_id(int m, int i) { return "charts/m" + std::to_string(m) + "/i" + std::to_string(i); }

/// Multiplication matrices on one chart and all their invariants.
inline CheckReport chart_multiplication_check(const ChartPresentation& c, int confluence_degree = -1) {
  CheckReport out;
  const std::string base = chart_id(c.m, c.i);
  const std::size_t n = c.cobasis.size();
  {
    Json d;
    d["cobasis"] = Json::array();
    for (const auto& b : c.cobasis) d["cobasis"].push_back(b.str());
    d["h_basis_size"] = c.basis().basis().size();
    d["leading_x"] = c.f_low().degree_in("x");
    d["leading_y"] = c.f_high().degree_in("y");
    bool ok = n == static_cast<std::size_t>(c.m) && c.f_low().degree_in("x") == c.m - c.i + 1 &&
              c.f_high().degree_in("y") == c.i;
    out.push_back(make_check(base + "/cobasis", kCobasisAnchor, ok, d));
  }
  MultiplicationPair mp;
  try {
    mp = multiplication_matrices(c);
    out.push_back(make_check(base + "/closure", kCobasisAnchor, true));
  } catch (const Error& e) {
    Json d;
    d["error"] = e.what();
    out.push_back(make_check(base + "/closure", kCobasisAnchor, false, d));
    return out;
  }
  Poly t = Poly::variable(c.ctx, "t");
  auto commute_ok = [&](const Matrix& p) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!c.normal_form(p[i][j] - (i == j ? t : Poly(c.ctx))).is_zero()) return false;
    return true;
  };
  {
    bool xy = commute_ok(matmul(mp.mx, mp.my)), yx = commute_ok(matmul(mp.my, mp.mx));
    Json d;
    d["mx_my"] = xy;
    d["my_mx"] = yx;
    out.push_back(make_check(base + "/product", kFlatnessAnchor, xy && yx, d));
  }
  for (bool xside : {true, false}) {
    Poly cp = charpoly(xside ? mp.mx : mp.my, c.ctx);
    Poly diff = c.normal_form(cp - f_in_lambda(c, xside));
    Json d;
    d["charpoly"] = c.normal_form(cp).str();
    if (!diff.is_zero()) d["residual"] = diff.str();
    out.push_back(make_check(base + (xside ? "/charpoly-x" : "/charpoly-y"), kCharpolyAnchor, diff.is_zero(), d));
  }
  {
    ChartReducer red(c);
    const int top = confluence_degree < 0 ? c.m + 2 : confluence_degree;
    int overlaps = 0;
    std::optional<std::string> bad;
    const int xv = c.ctx->id("x"), yv = c.ctx->id("y");
    for (int deg = 0; deg <= top && !bad; ++deg) {
      for (int p = 0; p <= deg && !bad; ++p) {
        Exponents e(c.ctx->size(), 0);
        e[xv] = p;
        e[yv] = deg - p;
        auto rules = red.applicable(e);
        if (rules.size() < 2) continue;
        ++overlaps;
        auto first = red.coordinates(red.reduce(red.rewrite(e, 1, rules[0])));
        for (std::size_t r = 1; r < rules.size(); ++r) {
          auto other = red.coordinates(red.reduce(red.rewrite(e, 1, rules[r])));
          for (std::size_t k = 0; k < first.size(); ++k)
            if (!c.normal_form(first[k] - other[k]).is_zero())
              bad = "x^" + std::to_string(p) + " y^" + std::to_string(deg - p);
        }
      }
    }
    Json d;
    d["max_degree"] = top;
    d["overlaps"] = overlaps;
    if (bad) d["witness"] = *bad;
    out.push_back(make_check(base + "/confluence", kConfluenceAnchor, !bad, d));
  }
  return out;
}

/// The linear relations among F_0..F_m, checked on every chart modulo H.
inline CheckReport verify_f_relations(int m, const std::vector<ChartPresentation>& charts) {
  CheckReport out;
  const std::string base = "charts/m" + std::to_string(m) + "/f-relation";
  auto univ = f_generators(m);
  const auto& ctx = univ.ctx;
  Poly x = Poly::variable(ctx, "x"), y = Poly::variable(ctx, "y");
  struct Rel {
    std::string id;
    Poly diff;
  };
  std::vector<Rel> rels;
  for (int i = 1; i <= m; ++i)
    for (int j = 0; j < i - 1; ++j)
      rels.push_back({base + "/u/i" + std::to_string(i) + "/j" + std::to_string(j),
                      detail::chain_var(ctx, 'u', i - 1, m) * univ.F[j] -
                          detail::chain_var(ctx, 'u', j, m) * x.pow(i - 1 - j) * univ.F[i - 1]});
  for (int i = 1; i < m; ++i)
    for (int j = i + 1; j <= m; ++j)
      rels.push_back({base + "/v/i" + std::to_string(i) + "/j" + std::to_string(j),
                      detail::chain_var(ctx, 'v', i, m) * univ.F[j] -
                          detail::chain_var(ctx, 'v', j, m) * y.pow(j - i) * univ.F[i]});
  if (rels.empty()) {
    Json d;
    d["vacuous"] = true;
    out.push_back(make_check(base, kFRelationAnchor, true, d));
    return out;
  }
  for (const auto& r : rels) {
    Json d;
    d["charts"] = Json::array();
    bool ok = true;
    for (const auto& c : charts) {
      Poly nf = c.normal_form(r.diff.substitute(chart_substitution(m, c.i, c.ctx), c.ctx));
      d["charts"].push_back(c.i);
      if (!nf.is_zero()) {
        ok = false;
        d["residual_chart"] = c.i;
        d["residual"] = nf.str();
        break;
      }
    }
    out.push_back(make_check(r.id, kFRelationAnchor, ok, d));
  }
  return out;
}

}  // namespace nodehilb
