#pragma once

// Fibres of the cycle map over the strata of type (a, b), node-scroll
// equation sets, punctual ideals in k[x, y]/(xy) and the interpolating-section
// ideal identity.

#include <algorithm>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "nodehilb/hilb/charts.hpp"
#include "nodehilb/ideal/groebner.hpp"
#include "nodehilb/report.hpp"

namespace nodehilb {

inline const Anchor kFibreAnchor{"fibre of the cycle map over a type (a, b) cycle",
                                 "union of C^m_i for b+1 <= i <= m-a-1 if a+b <= m-2; the point Q^m_{b+1} if a+b = m-1"};
inline const Anchor kScrollEquationsAnchor{"equations of the node scroll F_j^{(a|b)}",
                                           "v_1 = ... = v_{j+b} = u_{j+b+1} = ... = u_{m-1} = 0"};
inline const Anchor kChainAnchor{"adjacent node scrolls meet in a section", "F_j meets F_{j+1} in Q^n_{j+1}"};
inline const Anchor kPunctualAnchor{"punctual Hilbert scheme of the special fibre",
                                    "(x^{m-i} + (u/v) y^i), (x^{m+1-i}, y^i), (x^{m-i}, y^{i+1})"};
inline const Anchor kInterpolatingAnchor{"interpolating section ideal",
                                         "(s x^{n-j} + y^j)(x - c, y) = (s x^{n-j+1} - c s x^{n-j} - c y^j, y^{j+1})"};

/// State of one P^1 factor [u_k : v_k] on a locus of the special fibre.
enum class Cell { free, v_zero, u_zero, ratio };

using Pattern = std::vector<Cell>;  // index 0 is the factor k = 1

/// Zero conditions on the chain coordinates.
struct ZeroSet {
  std::vector<int> v_zero;
  std::vector<int> u_zero;

  std::vector<std::string> equations() const {
    std::vector<std::string> out;
    for (int k : v_zero) out.push_back(var_name("v", k) + " = 0");
    for (int k : u_zero) out.push_back(var_name("u", k) + " = 0");
    return out;
  }
};

struct LocusPiece {
  int dimension = 0;
  std::string name;  // "C_i", "Q_i", or the raw cell pattern
  int index = 0;     // i for C_i / Q_i, 0 otherwise
};

namespace detail {

inline bool refines(const Pattern& p, const Pattern& q) {
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] != q[k] && q[k] != Cell::free) return false;
  return true;
}

inline bool chain_ok(const Pattern& p) {
  for (std::size_t k = 0; k + 1 < p.size(); ++k)
    if (p[k] != Cell::v_zero && p[k + 1] != Cell::u_zero) return false;
  return true;
}

}  // namespace detail

/// Irreducible components, inside the special fibre of C~ (v_k u_{k+1} = 0),
/// of the locus where each factor obeys its constraint (free means unconstrained).
inline std::vector<Pattern> locus_components(const Pattern& constraint) {
  const std::size_t n = constraint.size();
  std::vector<Pattern> ok;
  Pattern cur(n);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == n) {
      if (detail::chain_ok(cur)) ok.push_back(cur);
      return;
    }
    if (constraint[k] == Cell::free) {
      for (Cell c : {Cell::free, Cell::v_zero, Cell::u_zero}) {
        cur[k] = c;
        self(self, k + 1);
      }
    } else {
      cur[k] = constraint[k];
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  std::vector<Pattern> maximal;
  for (const auto& p : ok) {
    bool dominated = std::any_of(ok.begin(), ok.end(), [&](const Pattern& q) { return q != p && detail::refines(p, q); });
    if (!dominated) maximal.push_back(p);
  }
  return maximal;
}

inline LocusPiece describe(const Pattern& p) {
  LocusPiece r;
  std::vector<int> free;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] == Cell::free) free.push_back(static_cast<int>(k) + 1);
  r.dimension = static_cast<int>(free.size());
  if (free.size() == 1) {
    const int i = free[0];
    bool shape = true;
    for (std::size_t k = 0; k < p.size(); ++k) {
      int idx = static_cast<int>(k) + 1;
      if (idx != i) shape = shape && p[k] == (idx < i ? Cell::v_zero : Cell::u_zero);
    }
    if (shape) {
      r.name = "C_" + std::to_string(i);
      r.index = i;
      return r;
    }
  }
  if (free.empty()) {
    std::size_t ones = 0;
    while (ones < p.size() && p[ones] == Cell::v_zero) ++ones;
    bool rest_u = std::all_of(p.begin() + ones, p.end(), [](Cell c) { return c == Cell::u_zero; });
    if (rest_u) {
      r.index = static_cast<int>(ones) + 1;
      r.name = "Q_" + std::to_string(r.index);
      return r;
    }
  }
  for (Cell c : p) r.name += c == Cell::free ? 'F' : c == Cell::v_zero ? 'V' : c == Cell::u_zero ? 'U' : 'R';
  return r;
}

inline Pattern pattern_of(int m, const ZeroSet& z) {
  Pattern p(m - 1, Cell::free);
  for (int k : z.v_zero) p.at(k - 1) = Cell::v_zero;
  for (int k : z.u_zero) {
    if (p.at(k - 1) == Cell::v_zero) throw InvalidStratum("u_k and v_k both vanish for k = " + std::to_string(k));
    p.at(k - 1) = Cell::u_zero;
  }
  return p;
}

/// Constraints on [u_k : v_k] from the H-equations at t = 0 over a cycle with
/// s^x_s != 0 exactly for s <= a and s^y_s != 0 exactly for s <= b.
inline Pattern type_constraints(int m, int a, int b) {
  Pattern p(m - 1, Cell::free);
  for (int k = 1; k < m; ++k) {
    bool x = m - k <= a, y = k <= b;  // s^x_{m-k} u_k = +- s^y_k v_k
    if (x && y) p[k - 1] = Cell::ratio;
    else if (x) p[k - 1] = Cell::u_zero;
    else if (y) p[k - 1] = Cell::v_zero;
  }
  return p;
}

struct FiberDescription {
  int m = 0, a = 0, b = 0;
  std::vector<int> components;  // indices i of C^m_i
  std::optional<int> point;     // index of Q^m, when the fibre is a point
  ZeroSet vanishing;
  std::vector<ZeroSet> printed_scroll_equations;
  std::vector<ZeroSet> corrected_scroll_equations;
};

/// The fibre as printed: components C^m_i for i in [b+1, m-a-1], or Q^m_{b+1}.
inline FiberDescription punctual_fiber(int m, int a, int b) {
  if (m < 1 || a < 0 || b < 0 || a + b > m - 1)
    throw InvalidStratum("type (" + std::to_string(a) + ", " + std::to_string(b) + ") invalid for m = " +
                         std::to_string(m));
  FiberDescription f;
  f.m = m;
  f.a = a;
  f.b = b;
  for (int k = 1; k <= b; ++k) f.vanishing.v_zero.push_back(k);
  for (int k = m - a; k < m; ++k) f.vanishing.u_zero.push_back(k);
  if (a + b == m - 1) {
    f.point = b + 1;
    return f;
  }
  const int n = m - a - b;
  for (int i = b + 1; i <= m - a - 1; ++i) f.components.push_back(i);
  for (int j = 1; j < n; ++j) {
    ZeroSet printed, corrected;
    for (int k = 1; k <= j + b; ++k) printed.v_zero.push_back(k);
    for (int k = 1; k < j + b; ++k) corrected.v_zero.push_back(k);
    for (int k = j + b + 1; k < m; ++k) {
      printed.u_zero.push_back(k);
      corrected.u_zero.push_back(k);
    }
    f.printed_scroll_equations.push_back(printed);
    f.corrected_scroll_equations.push_back(corrected);
  }
  return f;
}

inline std::string strata_id(int m, int a, int b) {
  return "strata/m" + std::to_string(m) + "/a" + std::to_string(a) + "/b" + std::to_string(b);
}

namespace detail {

inline Json pieces_json(const std::vector<Pattern>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(describe(p).name);
  return a;
}

}  // namespace detail

/// Printed fibre against the components derived from the H-equations, the
/// node-scroll equation sets, and the chain structure.
inline CheckReport verify_fiber(int m, int a, int b) {
  CheckReport out;
  const std::string base = strata_id(m, a, b);
  FiberDescription f = punctual_fiber(m, a, b);
  auto derived = m >= 2 ? locus_components(type_constraints(m, a, b)) : std::vector<Pattern>{Pattern{}};
  {
    std::vector<std::string> printed;
    for (int i : f.components) printed.push_back("C_" + std::to_string(i));
    if (f.point) printed.push_back("Q_" + std::to_string(*f.point));
    std::vector<std::string> got;
    for (const auto& p : derived) got.push_back(m >= 2 ? describe(p).name : "Q_1");
    std::sort(printed.begin(), printed.end());
    std::sort(got.begin(), got.end());
    Json d;
    d["printed"] = printed;
    d["derived"] = got;
    d["component_count"] = f.components.size();
    d["vanishing"] = f.vanishing.equations();
    bool count_ok = f.point ? f.components.empty()
                            : static_cast<int>(f.components.size()) == m - 1 - a - b;
    out.push_back(make_check(base + "/fibre", kFibreAnchor, printed == got && count_ok, d));
  }
  for (std::size_t j = 0; j < f.printed_scroll_equations.size(); ++j) {
    const int expected = f.components[j];
    auto locus = [&](const ZeroSet& z) {
      Json r;
      auto comps = locus_components(pattern_of(m, z));
      r["equations"] = z.equations();
      r["locus"] = detail::pieces_json(comps);
      bool ok = comps.size() == 1 && describe(comps[0]).name == "C_" + std::to_string(expected);
      return std::make_pair(ok, r);
    };
    auto [printed_ok, pj] = locus(f.printed_scroll_equations[j]);
    auto [corrected_ok, cj] = locus(f.corrected_scroll_equations[j]);
    CheckRecord r;
    r.id = base + "/scroll/j" + std::to_string(j + 1);
    r.anchor = kScrollEquationsAnchor;
    r.detail["expected"] = "C_" + std::to_string(expected);
    r.detail["printed"] = pj;
    r.detail["corrected"] = cj;
    r.status = printed_ok ? Status::verified : (corrected_ok ? Status::corrected : Status::failed);
    out.push_back(std::move(r));
  }
  for (std::size_t j = 0; j + 1 < f.corrected_scroll_equations.size(); ++j) {
    const auto& z1 = f.corrected_scroll_equations[j];
    const auto& z2 = f.corrected_scroll_equations[j + 1];
    ZeroSet both;
    std::set_union(z1.v_zero.begin(), z1.v_zero.end(), z2.v_zero.begin(), z2.v_zero.end(),
                   std::back_inserter(both.v_zero));
    std::set_union(z1.u_zero.begin(), z1.u_zero.end(), z2.u_zero.begin(), z2.u_zero.end(),
                   std::back_inserter(both.u_zero));
    auto meet = locus_components(pattern_of(m, both));
    auto free1 = describe(locus_components(pattern_of(m, z1)).at(0)).index;
    auto free2 = describe(locus_components(pattern_of(m, z2)).at(0)).index;
    const int q = f.components[j] + 1;
    Json d;
    d["meet"] = detail::pieces_json(meet);
    d["expected"] = "Q_" + std::to_string(q);
    d["free_index_shift"] = free2 - free1;
    bool ok = meet.size() == 1 && describe(meet[0]).name == "Q_" + std::to_string(q) && free2 - free1 == 1;
    out.push_back(make_check(base + "/chain/j" + std::to_string(j + 1), kChainAnchor, ok, d));
  }
  return out;
}

enum class PointKind { principal, zero, infinity };  // [u:v] with uv != 0, [0:1], [1:0]

inline const char* to_string(PointKind k) {
  switch (k) {
    case PointKind::principal: return "principal";
    case PointKind::zero: return "zero";
    case PointKind::infinity: return "infinity";
  }
  return "?";
}

struct P1Point {
  PointKind kind = PointKind::principal;
  Rational ratio = 1;  // u/v for principal points
};

struct LengthCertificate {
  std::vector<std::string> generators;
  std::vector<std::string> cobasis;
  int length = 0;
};

/// Valid i: principal 1..m-1, [0:1] 1..m, [1:0] 0..m-1.
inline std::vector<Poly> punctual_ideal(int m, int i, const P1Point& pt, const ContextPtr& ctx) {
  auto bad = [&]() {
    return InvalidStratum(std::string("index ") + std::to_string(i) + " outside the range for a " +
                          to_string(pt.kind) + " point at m = " + std::to_string(m));
  };
  Poly x = Poly::variable(ctx, "x"), y = Poly::variable(ctx, "y");
  switch (pt.kind) {
    case PointKind::principal:
      if (i < 1 || i > m - 1) throw bad();
      if (pt.ratio == 0) throw ZeroRatio("principal punctual ideal needs u/v != 0");
      return {x.pow(m - i) + pt.ratio * y.pow(i)};
    case PointKind::zero:
      if (i < 1 || i > m) throw bad();
      return {x.pow(m + 1 - i), y.pow(i)};
    case PointKind::infinity:
      if (i < 0 || i > m - 1) throw bad();
      return {x.pow(m - i), y.pow(i + 1)};
  }
  return {};
}

/// Length of k[x, y]/(xy, I) by enumerating standard monomials.
inline LengthCertificate punctual_ideal_length(int m, int i, const P1Point& pt) {
  auto ctx = plain_context({"x", "y"});
  auto gens = punctual_ideal(m, i, pt, ctx);
  LengthCertificate cert;
  for (const auto& g : gens) cert.generators.push_back(g.str());
  gens.push_back(Poly::variable(ctx, "x") * Poly::variable(ctx, "y"));
  auto gb = groebner(gens, ctx, MonomialOrder(MonomialOrder::Kind::grevlex));
  auto sm = gb.standard_monomials();
  if (!sm) throw PreconditionFailed("punctual quotient is not finite");
  for (const auto& e : *sm) cert.cobasis.push_back(Poly::monomial(ctx, e).str());
  cert.length = static_cast<int>(sm->size());
  return cert;
}

inline CheckReport verify_punctual_lengths(int m) {
  CheckReport out;
  const std::string base = "strata/m" + std::to_string(m) + "/punctual";
  auto add = [&](int i, PointKind kind) {
    Json d;
    bool ok = true;
    std::vector<Rational> ratios = kind == PointKind::principal ? std::vector<Rational>{1, frac(-3, 2)}
                                                               : std::vector<Rational>{1};
    d["lengths"] = Json::array();
    for (const auto& r : ratios) {
      auto cert = punctual_ideal_length(m, i, {kind, r});
      d["lengths"].push_back(cert.length);
      d["generators"] = cert.generators;
      d["cobasis"] = cert.cobasis;
      ok = ok && cert.length == m;
    }
    out.push_back(make_check(base + "/" + to_string(kind) + "/i" + std::to_string(i), kPunctualAnchor, ok, d));
  };
  for (int i = 1; i <= m - 1; ++i) add(i, PointKind::principal);
  for (int i = 1; i <= m; ++i) add(i, PointKind::zero);
  for (int i = 0; i <= m - 1; ++i) add(i, PointKind::infinity);
  return out;
}

/// Both-way ideal membership of the interpolating-section identity in
/// k[x, y, s, c], modulo xy; the negative control drops xy.
inline CheckReport interpolating_section_check(int n, int j) {
  if (j < 1 || j > n - 1) throw PreconditionFailed("interpolating section needs 1 <= j <= n-1");
  auto ctx = plain_context({"x", "y", "s", "c"});
  Poly x = Poly::variable(ctx, "x"), y = Poly::variable(ctx, "y");
  Poly s = Poly::variable(ctx, "s"), c = Poly::variable(ctx, "c");
  Poly f = s * x.pow(n - j) + y.pow(j);
  std::vector<Poly> lhs{f * (x - c), f * y};
  std::vector<Poly> rhs{s * x.pow(n - j + 1) - c * s * x.pow(n - j) - c * y.pow(j), y.pow(j + 1)};
  MonomialOrder order(MonomialOrder::Kind::grevlex);
  auto compare = [&](bool with_xy) {
    auto l = lhs, r = rhs;
    if (with_xy) {
      l.push_back(x * y);
      r.push_back(x * y);
    }
    auto gl = groebner(l, ctx, order), gr = groebner(r, ctx, order);
    Json d;
    auto a = gl.first_not_contained(r), b = gr.first_not_contained(l);
    if (a) d["not_in_product"] = r[*a].str();
    if (b) d["not_in_stated"] = l[*b].str();
    d["equal"] = !a && !b;
    return d;
  };
  const std::string base = "strata/interp/n" + std::to_string(n) + "/j" + std::to_string(j);
  CheckReport out;
  Json with = compare(true);
  out.push_back(make_check(base + "/identity", kInterpolatingAnchor, with["equal"].get<bool>(), with));
  Json without = compare(false);
  out.push_back(make_check(base + "/control", kInterpolatingAnchor, !without["equal"].get<bool>(), without));
  return out;
}

}  // namespace nodehilb
