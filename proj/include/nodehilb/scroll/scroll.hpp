#pragma once

// Formal divisor-class calculus for node scrolls and polyscrolls, and the
// restriction of the mixed Van der Monde determinant to a node configuration.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "nodehilb/report.hpp"
#include "nodehilb/ring/det.hpp"
#include "nodehilb/ring/poly.hpp"

namespace nodehilb {

inline const Anchor kDClassAnchor{"D-classes on the residual Hilbert scheme",
                                  "D^n_j = -C(n-j+1,2) psi_x - C(j,2) psi_y + (n-j+1) Nm_x + j Nm_y"};
inline const Anchor kNodeScrollAnchor{"node scroll structure",
                                      "F^n_j = P(O(D^n_j) + O(D^n_{j+1})), O(1) = -Gamma(m) + Gamma(m-n)"};
inline const Anchor kScrollSectionsAnchor{"sections of a node scroll",
                                          "-Gamma(m) ~ Q_j + D^n_{j+1} ~ Q_{j+1} + D^n_j"};
inline const Anchor kLocalGlobalAnchor{"local node-scroll presentation",
                                       "L_j - L_{j+1} = D_theta'' - D_theta'"};
inline const Anchor kPolyscrollAnchor{"node polyscroll structure",
                                      "O(1,...,1) = -Gamma(m) + Gamma(m - |n|)"};
inline const Anchor kPullbackAnchor{
    "pullback of the intermediate diagonal to a node configuration",
    "-C(n-j0+1,2) psi_x - C(j0,2) psi_y + (n-j0+1) Nm_x + j0 Nm_y + Gamma(m-n), j0 = min(j,n)"};

enum class SymbolKind { psi_x, psi_y, norm_x, norm_y, gamma, boundary, d_theta_x, d_theta_y };

/// A basis symbol. `node` distinguishes nodes in a polyscroll (0 for a
/// single node); `level` is the k of Gamma(k).
struct Symbol {
  SymbolKind kind = SymbolKind::psi_x;
  int node = 0;
  int level = 0;

  auto key() const { return std::tuple(static_cast<int>(kind), node, level); }
  bool operator<(const Symbol& o) const { return key() < o.key(); }
  bool operator==(const Symbol& o) const { return key() == o.key(); }

  std::string str() const {
    std::string s;
    switch (kind) {
      case SymbolKind::psi_x: s = "psi_x"; break;
      case SymbolKind::psi_y: s = "psi_y"; break;
      case SymbolKind::norm_x: s = "Nm_x"; break;
      case SymbolKind::norm_y: s = "Nm_y"; break;
      case SymbolKind::gamma: return "Gamma(" + std::to_string(level) + ")";
      case SymbolKind::boundary: s = "boundary"; break;
      case SymbolKind::d_theta_x: s = "D_theta'"; break;
      case SymbolKind::d_theta_y: s = "D_theta''"; break;
    }
    if (node > 0) s += "[" + std::to_string(node) + "]";
    return s;
  }
};

inline Symbol psi_x(int node = 0) { return {SymbolKind::psi_x, node, 0}; }
inline Symbol psi_y(int node = 0) { return {SymbolKind::psi_y, node, 0}; }
inline Symbol norm_x(int node = 0) { return {SymbolKind::norm_x, node, 0}; }
inline Symbol norm_y(int node = 0) { return {SymbolKind::norm_y, node, 0}; }
inline Symbol gamma_class(int k) { return {SymbolKind::gamma, 0, k}; }

/// Element of the free abelian group on the symbols.
class PicClass {
 public:
  PicClass() = default;
  PicClass(Symbol s, long long c = 1) {
    if (c != 0) coef_[s] = c;
  }

  long long operator[](const Symbol& s) const {
    auto it = coef_.find(s);
    return it == coef_.end() ? 0 : it->second;
  }
  const std::map<Symbol, long long>& terms() const { return coef_; }
  bool is_zero() const { return coef_.empty(); }

  PicClass& operator+=(const PicClass& o) {
    for (const auto& [s, c] : o.coef_) bump(s, c);
    return *this;
  }
  PicClass& operator-=(const PicClass& o) {
    for (const auto& [s, c] : o.coef_) bump(s, -c);
    return *this;
  }
  friend PicClass operator+(PicClass a, const PicClass& b) { return a += b; }
  friend PicClass operator-(PicClass a, const PicClass& b) { return a -= b; }
  friend PicClass operator-(const PicClass& a) { return PicClass() - a; }
  friend PicClass operator*(long long k, const PicClass& a) {
    PicClass out;
    for (const auto& [s, c] : a.coef_) out.bump(s, k * c);
    return out;
  }
  bool operator==(const PicClass& o) const { return coef_ == o.coef_; }

  /// Exchanges the x and y branch symbols.
  PicClass swap_branches() const {
    PicClass out;
    for (const auto& [key, c] : coef_) {
      Symbol s = key;
      switch (s.kind) {
        case SymbolKind::psi_x: s.kind = SymbolKind::psi_y; break;
        case SymbolKind::psi_y: s.kind = SymbolKind::psi_x; break;
        case SymbolKind::norm_x: s.kind = SymbolKind::norm_y; break;
        case SymbolKind::norm_y: s.kind = SymbolKind::norm_x; break;
        case SymbolKind::d_theta_x: s.kind = SymbolKind::d_theta_y; break;
        case SymbolKind::d_theta_y: s.kind = SymbolKind::d_theta_x; break;
        default: break;
      }
      out.bump(s, c);
    }
    return out;
  }

  /// Sets every psi symbol to zero.
  PicClass drop_psi() const {
    PicClass out;
    for (const auto& [s, c] : coef_)
      if (s.kind != SymbolKind::psi_x && s.kind != SymbolKind::psi_y) out.bump(s, c);
    return out;
  }

  /// Moves the symbols of node `from` to node `to`.
  PicClass relabel(int from, int to) const {
    PicClass out;
    for (const auto& [key, c] : coef_) {
      Symbol s = key;
      if (s.kind != SymbolKind::gamma && s.node == from) s.node = to;
      out.bump(s, c);
    }
    return out;
  }

  /// Rewrites the local divisors D_theta', D_theta'' as the norm divisors.
  PicClass globalize() const {
    PicClass out;
    for (const auto& [key, c] : coef_) {
      Symbol s = key;
      if (s.kind == SymbolKind::d_theta_x) s.kind = SymbolKind::norm_x;
      else if (s.kind == SymbolKind::d_theta_y) s.kind = SymbolKind::norm_y;
      out.bump(s, c);
    }
    return out;
  }

  std::string str() const {
    if (coef_.empty()) return "0";
    std::string out;
    for (const auto& [s, c] : coef_) {
      long long a = c < 0 ? -c : c;
      if (out.empty()) out += c < 0 ? "-" : "";
      else out += c < 0 ? " - " : " + ";
      if (a != 1) out += std::to_string(a) + "*";
      out += s.str();
    }
    return out;
  }

  Json to_json() const {
    Json j = Json::object();
    for (const auto& [s, c] : coef_) j[s.str()] = c;
    return j;
  }

 private:
  void bump(const Symbol& s, long long c) {
    if (c == 0) return;
    long long& v = coef_[s];
    v += c;
    if (v == 0) coef_.erase(s);
  }

  std::map<Symbol, long long> coef_;
};

inline long long binom2(long long n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// D^n_j on the residual Hilbert scheme of the given node.
inline PicClass d_class(int n, int j, int node = 0) {
  if (j < 1 || j > n)
    throw IndexOutOfRange("d_class needs 1 <= j <= n, got n=" + std::to_string(n) + " j=" + std::to_string(j));
  PicClass c;
  c += PicClass(psi_x(node), -binom2(n - j + 1));
  c += PicClass(psi_y(node), -binom2(j));
  c += PicClass(norm_x(node), n - j + 1);
  c += PicClass(norm_y(node), j);
  return c;
}

struct ScrollDescriptor {
  int n = 0, j = 0, k = 0, m = 0, node = 0;
  PicClass lower, upper;  // D^n_j, D^n_{j+1}
  std::string section_lower, section_upper;
  PicClass polarization;  // -Gamma(m) + Gamma(m - n)

  /// Q_j - Q_{j+1}, read off the two section identities.
  PicClass section_difference() const { return lower - upper; }

  ScrollDescriptor twist(const PicClass& c) const {
    ScrollDescriptor d = *this;
    d.lower += c;
    d.upper += c;
    return d;
  }

  /// Summands in the dual presentation P(O(-D_j - Gamma(k)) + O(-D_{j+1} - Gamma(k))).
  std::pair<PicClass, PicClass> dual_summands() const {
    PicClass g(gamma_class(k));
    return {-(lower + g), -(upper + g)};
  }

  Json to_json() const {
    Json d;
    d["n"] = n;
    d["j"] = j;
    d["k"] = k;
    if (node > 0) d["node"] = node;
    d["summands"] = Json::array({lower.str(), upper.str()});
    d["sections"] = Json::array({section_lower, section_upper});
    d["polarization"] = polarization.str();
    return d;
  }
};

/// The scroll F^n_j over the Hilbert scheme of the remaining m - n points.
inline ScrollDescriptor node_scroll(int n, int j, int m, int node = 0) {
  if (j < 1 || j >= n)
    throw IndexOutOfRange("node_scroll needs 1 <= j < n, got n=" + std::to_string(n) + " j=" + std::to_string(j));
  if (m < n) throw MultiplicityOverflow("node multiplicity " + std::to_string(n) + " exceeds " + std::to_string(m));
  ScrollDescriptor d;
  d.n = n;
  d.j = j;
  d.m = m;
  d.k = m - n;
  d.node = node;
  d.lower = d_class(n, j, node);
  d.upper = d_class(n, j + 1, node);
  std::string tag = node > 0 ? "[" + std::to_string(node) + "]" : "";
  d.section_lower = "Q_" + std::to_string(j) + tag;
  d.section_upper = "Q_" + std::to_string(j + 1) + tag;
  d.polarization = -PicClass(gamma_class(m)) + PicClass(gamma_class(m - n));
  return d;
}

inline std::string scroll_id(int n, int j) { return "scrolls/n" + std::to_string(n) + "/j" + std::to_string(j); }

/// Branch swap sends D^n_j to D^n_{n+1-j}.
inline CheckReport d_class_symmetry(int n) {
  CheckReport out;
  for (int j = 1; j <= n; ++j) {
    PicClass swapped = d_class(n, j).swap_branches();
    PicClass mirror = d_class(n, n + 1 - j);
    Json d;
    d["class"] = d_class(n, j).str();
    d["swapped"] = swapped.str();
    d["mirror"] = mirror.str();
    out.push_back(make_check(scroll_id(n, j) + "/swap", kDClassAnchor, swapped == mirror, d));
  }
  return out;
}

/// Summand and section identities of the node scroll, and twist invariance.
inline CheckReport node_scroll_check(int n, int j, int m) {
  auto s = node_scroll(n, j, m);
  std::string base = scroll_id(n, j) + "/m" + std::to_string(m);
  CheckReport out;

  Json d = s.to_json();
  PicClass gap = s.upper - s.lower;
  PicClass expected = d_class(n, j + 1) - d_class(n, j);
  d["summand_difference"] = gap.str();
  bool shape = s.section_lower != s.section_upper && gap == expected &&
               s.polarization == -PicClass(gamma_class(m)) + PicClass(gamma_class(m - n));
  out.push_back(make_check(base + "/summands", kNodeScrollAnchor, shape, d));

  // -Gamma ~ Q_j + D_{j+1} ~ Q_{j+1} + D_j, so Q_j - Q_{j+1} = D_j - D_{j+1}.
  Json e;
  e["via_lower_section"] = s.section_lower + " + (" + s.upper.str() + ")";
  e["via_upper_section"] = s.section_upper + " + (" + s.lower.str() + ")";
  e["section_difference"] = s.section_difference().str();
  out.push_back(make_check(base + "/sections", kScrollSectionsAnchor, s.section_difference() == -gap, e));

  PicClass twist = PicClass(psi_x(), 3) - PicClass(norm_y(), 2) + PicClass(gamma_class(m - n));
  auto t = s.twist(twist);
  Json f;
  f["twist"] = twist.str();
  f["section_difference"] = t.section_difference().str();
  auto [a, b] = s.dual_summands();
  f["dual_summands"] = Json::array({a.str(), b.str()});
  bool twist_ok = t.section_difference() == s.section_difference() && (b - a) == s.lower - s.upper;
  out.push_back(make_check(base + "/twist", kNodeScrollAnchor, twist_ok, f));
  return out;
}

/// Summand difference of the global scroll against the local presentation
/// with D_theta' -> Nm_x, D_theta'' -> Nm_y and trivial psi.
inline CheckReport local_global_consistency(int n, int j) {
  if (j < 1 || j >= n)
    throw IndexOutOfRange("local_global_consistency needs 1 <= j < n");
  PicClass diff = d_class(n, j + 1) - d_class(n, j);
  PicClass expected = PicClass(psi_x(), n - j) - PicClass(psi_y(), j) - PicClass(norm_x()) + PicClass(norm_y());
  PicClass local = PicClass(Symbol{SymbolKind::d_theta_y}) - PicClass(Symbol{SymbolKind::d_theta_x});
  PicClass truncated = diff.drop_psi();
  Json d;
  d["difference"] = diff.str();
  d["psi_truncated"] = truncated.str();
  d["local"] = local.str();
  d["assumption"] = "D_theta' and D_theta'' globalize to the norm divisors Nm_x and Nm_y";
  bool ok = diff == expected && truncated == local.globalize();
  return {make_check(scroll_id(n, j) + "/local-global", kLocalGlobalAnchor, ok, d)};
}

struct PolyscrollResult {
  std::vector<ScrollDescriptor> scrolls;
  std::vector<PicClass> steps;  // -Gamma(m_i) + Gamma(m_{i+1})
  PicClass polarization;        // sum of the steps
  int k = 0;
};

inline PolyscrollResult polyscroll(const std::vector<int>& ns, const std::vector<int>& js, int m) {
  if (ns.empty() || ns.size() != js.size()) throw PreconditionFailed("polyscroll needs equal nonempty lists");
  int total = std::accumulate(ns.begin(), ns.end(), 0);
  if (total > m)
    throw MultiplicityOverflow("total node multiplicity " + std::to_string(total) + " exceeds " + std::to_string(m));
  PolyscrollResult r;
  r.k = m - total;
  int level = m;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    auto s = node_scroll(ns[i], js[i], m, static_cast<int>(i) + 1);
    s.k = r.k;
    r.scrolls.push_back(s);
    PicClass step = -PicClass(gamma_class(level)) + PicClass(gamma_class(level - ns[i]));
    r.steps.push_back(step);
    r.polarization += step;
    level -= ns[i];
  }
  return r;
}

/// Telescoping of the polarization and invariance under reordering the nodes.
inline CheckReport polyscroll_check(const std::vector<int>& ns, const std::vector<int>& js, int m) {
  auto r = polyscroll(ns, js, m);
  std::string base = "scrolls/poly/m" + std::to_string(m);
  for (std::size_t i = 0; i < ns.size(); ++i) base += "/" + std::to_string(ns[i]) + "." + std::to_string(js[i]);
  PicClass expected = -PicClass(gamma_class(m)) + PicClass(gamma_class(r.k));
  Json d;
  d["k"] = r.k;
  d["polarization"] = r.polarization.str();
  Json steps = Json::array();
  for (const auto& s : r.steps) steps.push_back(s.str());
  d["steps"] = steps;
  CheckReport out{make_check(base + "/telescoping", kPolyscrollAnchor, r.polarization == expected, d)};

  std::vector<std::size_t> perm(ns.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  if (ns.size() > 2) std::rotate(perm.begin(), perm.begin() + 1, perm.end());
  std::vector<int> pn, pj;
  for (auto p : perm) pn.push_back(ns[p]), pj.push_back(js[p]);
  auto q = polyscroll(pn, pj, m);
  bool same = q.polarization == r.polarization;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const auto& a = q.scrolls[i];
    const auto& b = r.scrolls[perm[i]];
    same = same && a.n == b.n && a.j == b.j && a.k == b.k && a.lower.relabel(a.node, b.node) == b.lower &&
           a.upper.relabel(a.node, b.node) == b.upper;
  }
  Json e;
  e["permutation"] = perm;
  e["polarization"] = q.polarization.str();
  out.push_back(make_check(base + "/permutation", kPolyscrollAnchor, same, e));
  return out;
}

struct FactorCounts {
  int w_diagonals = 0;
  int z_diagonals = 0;
  int free_diagonals = 0;
  std::optional<int> x_branch_order, y_branch_order;  // -1: vanishes identically
  Poly restriction, residual;
  std::string content;
};

namespace detail {

/// Removes every copy of `f` from `p`, returning the multiplicity.
inline int strip_factor(Poly& p, const Poly& f) {
  int count = 0;
  for (;;) {
    try {
      p = p.exact_div(f);
      ++count;
    } catch (const NotDivisible&) {
      return count;
    }
  }
}

/// Monomial content: componentwise minimum exponent over the terms.
inline Poly monomial_content(const Poly& p) {
  Exponents e = p.terms().front().exp;
  for (const auto& t : p.terms())
    for (std::size_t v = 0; v < e.size(); ++v) e[v] = std::min(e[v], t.exp[v]);
  return Poly::monomial(p.context(), e);
}

}  // namespace detail

/// det V^m_j with n - j0 + 1 points at (w_a, 0), j0 - 1 points at (0, z_b)
/// and the remaining m - n points at free coordinates (x_c, y_c).
inline FactorCounts restriction_factors(int m, int n, int j) {
  if (j < 1 || j > m || n < 1 || n > m)
    throw IndexOutOfRange("restriction needs 1 <= j <= m and 1 <= n <= m");
  const int j0 = std::min(j, n), nx = n - j0 + 1, ny = j0 - 1, k = m - n;
  std::vector<std::string> names;
  for (int a = 1; a <= nx; ++a) names.push_back("w" + std::to_string(a));
  for (int b = 1; b <= ny; ++b) names.push_back("z" + std::to_string(b));
  for (int c = 1; c <= k; ++c) names.push_back("x" + std::to_string(c));
  for (int c = 1; c <= k; ++c) names.push_back("y" + std::to_string(c));
  names.push_back("e");
  auto ctx = plain_context(names);
  auto var = [&](const std::string& s) { return Poly::variable(ctx, s); };
  auto zero = Poly(ctx);
  std::vector<std::pair<Poly, Poly>> points;
  for (int a = 1; a <= nx; ++a) points.emplace_back(var("w" + std::to_string(a)), zero);
  for (int b = 1; b <= ny; ++b) points.emplace_back(zero, var("z" + std::to_string(b)));
  for (int c = 1; c <= k; ++c) points.emplace_back(var("x" + std::to_string(c)), var("y" + std::to_string(c)));

  Matrix M;
  for (int p = 0; p <= m - j; ++p) {
    std::vector<Poly> row;
    for (const auto& pt : points) row.push_back(pt.first.pow(p));
    M.push_back(std::move(row));
  }
  for (int p = 1; p <= j - 1; ++p) {
    std::vector<Poly> row;
    for (const auto& pt : points) row.push_back(pt.second.pow(p));
    M.push_back(std::move(row));
  }
  FactorCounts fc{0, 0, 0, std::nullopt, std::nullopt, det(M), Poly(ctx), ""};
  if (fc.restriction.is_zero())
    throw IdenticallyZero("det V^" + std::to_string(m) + "_" + std::to_string(j) +
                          " vanishes on the node configuration with n=" + std::to_string(n));

  Poly rest = fc.restriction;
  for (int a = 1; a <= nx; ++a)
    for (int b = a + 1; b <= nx; ++b)
      fc.w_diagonals += detail::strip_factor(rest, var("w" + std::to_string(a)) - var("w" + std::to_string(b)));
  for (int a = 1; a <= ny; ++a)
    for (int b = a + 1; b <= ny; ++b)
      fc.z_diagonals += detail::strip_factor(rest, var("z" + std::to_string(a)) - var("z" + std::to_string(b)));
  for (int c = 1; c <= k; ++c)
    for (int d = c + 1; d <= k; ++d) {
      fc.free_diagonals += detail::strip_factor(rest, var("x" + std::to_string(c)) - var("x" + std::to_string(d)));
      fc.free_diagonals += detail::strip_factor(rest, var("y" + std::to_string(c)) - var("y" + std::to_string(d)));
    }
  Poly content = detail::monomial_content(rest);
  fc.content = content.str();
  fc.residual = rest.exact_div(content);

  if (k >= 1) {
    // Cluster the placed points at the node with scale e, then send the first
    // free point into the node along each branch at the same scale.
    std::map<std::string, Poly> cluster;
    for (int a = 1; a <= nx; ++a) cluster.emplace("w" + std::to_string(a), var("e") * var("w" + std::to_string(a)));
    for (int b = 1; b <= ny; ++b) cluster.emplace("z" + std::to_string(b), var("e") * var("z" + std::to_string(b)));
    int base = fc.restriction.substitute(cluster).adic_order("e");
    auto approach = [&](bool x_branch) {
      auto s = cluster;
      s.emplace("x1", x_branch ? var("e") : zero);
      s.emplace("y1", x_branch ? zero : var("e"));
      Poly q = fc.restriction.substitute(s);
      return q.is_zero() ? -1 : q.adic_order("e") - base;
    };
    fc.x_branch_order = approach(true);
    fc.y_branch_order = approach(false);
  }
  return fc;
}

/// Factor counts of the restricted determinant against the pullback formula.
/// Every comparison is reported; only non-vanishing is required.
inline CheckReport restriction_factorization(int m, int n, int j) {
  const int j0 = std::min(j, n);
  std::string id = "scrolls/restriction/m" + std::to_string(m) + "/n" + std::to_string(n) + "/j" + std::to_string(j);
  Json d;
  d["j0"] = j0;
  d["points_on_x"] = n - j0 + 1;
  d["points_on_y"] = j0 - 1;
  d["free_points"] = m - n;
  try {
    auto fc = restriction_factors(m, n, j);
    auto cmp = [](auto computed, auto printed) {
      Json c;
      c["computed"] = computed;
      c["printed"] = printed;
      c["match"] = computed == printed;
      return c;
    };
    d["w_diagonals"] = cmp(fc.w_diagonals, binom2(n - j0 + 1));
    d["z_diagonals"] = cmp(fc.z_diagonals, binom2(j0));
    d["free_diagonals"] = cmp(fc.free_diagonals, binom2(m - n));
    auto order = [](int o) { return o < 0 ? Json("infinite") : Json(o); };
    auto branch = [&](const std::optional<int>& o, int printed) {
      if (o) return cmp(order(*o), Json(printed));
      Json c;
      c["computed"] = "undefined without free points";
      c["printed"] = printed;
      c["match"] = nullptr;
      return c;
    };
    d["x_branch_order"] = branch(fc.x_branch_order, n - j0 + 1);
    d["y_branch_order"] = branch(fc.y_branch_order, j0);
    d["content"] = fc.content;
    d["residual_terms"] = fc.residual.size();
    if (fc.restriction.size() <= 24) d["restriction"] = fc.restriction.str();
    return {make_check(id, kPullbackAnchor, true, d)};
  } catch (const IdenticallyZero& e) {
    d["error"] = e.what();
    return {make_check(id, kPullbackAnchor, false, d)};
  }
}

}  // namespace nodehilb
