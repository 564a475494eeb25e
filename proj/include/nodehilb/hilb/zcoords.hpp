#pragma once

// Projective Z-coordinates Z_i = u_1...u_{i-1} v_i...v_{m-1}: their quadratic
// relations, compatibility with the symmetric functions through Z_i -> G_i,
// and elimination of Z recovering the equations of the symmetric product.

#include <optional>
#include <string>
#include <vector>

#include "nodehilb/hilb/charts.hpp"
#include "nodehilb/ideal/groebner.hpp"
#include "nodehilb/report.hpp"
#include "nodehilb/sym/symfun.hpp"
#include "nodehilb/sym/vdm.hpp"

namespace nodehilb {

inline const Anchor kZQuadraticAnchor{"quadratic relations of the Z-coordinates",
                                      "Z_i Z_j = t^{j-i-1} Z_{i+1} Z_{j-1}, i < j-1"};
inline const Anchor kSigmaZAnchor{"linear relations between Z and the symmetric functions",
                                  "s^y_i Z_i = s^x_{m-i} Z_{i+1}, i = 1, ..., m-1"};
inline const Anchor kBoundaryZAnchor{"end rows of the (u, v) presentation in Z form",
                                     "s^x_m Z_2 = t Z_1, s^y_m Z_{m-1} = t Z_m"};
inline const Anchor kEliminationAnchor{"equations of the symmetric product by elimination of Z",
                                       "image of sigma is cut out by s^y_m s^x_j = t^j s^y_{m-j}, "
                                       "s^x_m s^y_j = t^j s^x_{m-j}"};

/// u_1..u_{m-1}, v_1..v_{m-1}, t.
inline ContextPtr uv_context(int m) {
  std::vector<std::string> names;
  for (int k = 1; k < m; ++k) names.push_back(var_name("u", k));
  for (int k = 1; k < m; ++k) names.push_back(var_name("v", k));
  names.push_back("t");
  return plain_context(names);
}

inline Exponents z_monomial(const ContextPtr& ctx, int m, int i) {
  Exponents e(ctx->size(), 0);
  for (int k = 1; k < i; ++k) e[ctx->id(var_name("u", k))] = 1;
  for (int k = i; k < m; ++k) e[ctx->id(var_name("v", k))] = 1;
  return e;
}

/// Applies v_k u_{k+1} -> t u_k v_{k+1} until no rule applies; returns the
/// number of rewrites.
inline int rewrite_chain(const ContextPtr& ctx, int m, Exponents& e) {
  const int tv = ctx->id("t");
  int steps = 0;
  for (bool again = true; again;) {
    again = false;
    for (int k = 1; k + 1 < m; ++k) {
      int vk = ctx->id(var_name("v", k)), uk1 = ctx->id(var_name("u", k + 1));
      int uk = ctx->id(var_name("u", k)), vk1 = ctx->id(var_name("v", k + 1));
      while (e[vk] > 0 && e[uk1] > 0) {
        --e[vk];
        --e[uk1];
        ++e[uk];
        ++e[vk1];
        ++e[tv];
        ++steps;
        again = true;
      }
    }
  }
  return steps;
}

inline std::string z_id(int m) { return "z/m" + std::to_string(m); }

/// Quadratic Z relations by monomial rewriting; with `with_g`, also the
/// sigma-Z relations and the end rows after Z_i -> G_i.
inline CheckReport z_relations_check(int m, bool with_g = true) {
  if (m < 2) throw PreconditionFailed("Z-relations need m >= 2");
  CheckReport out;
  auto ctx = uv_context(m);
  const int tv = ctx->id("t");
  for (int i = 1; i <= m; ++i) {
    for (int j = i + 2; j <= m; ++j) {
      Exponents lhs = z_monomial(ctx, m, i), rhs = z_monomial(ctx, m, i + 1);
      Exponents zj = z_monomial(ctx, m, j), zj1 = z_monomial(ctx, m, j - 1);
      for (std::size_t v = 0; v < lhs.size(); ++v) {
        lhs[v] += zj[v];
        rhs[v] += zj1[v];
      }
      rhs[tv] += j - i - 1;
      int sl = rewrite_chain(ctx, m, lhs), sr = rewrite_chain(ctx, m, rhs);
      Json d;
      d["rewrites_lhs"] = sl;
      d["rewrites_rhs"] = sr;
      d["normal_form"] = Poly::monomial(ctx, lhs).str();
      out.push_back(make_check(z_id(m) + "/quadratic/i" + std::to_string(i) + "/j" + std::to_string(j),
                               kZQuadraticAnchor, lhs == rhs, d));
    }
  }
  if (!with_g) return out;
  auto pts = points_context(m);
  auto gs = g_elements(pts);
  auto G = [&](int i) -> const Poly& { return gs[i - 1].sigma_form; };
  Poly t = Poly::variable(pts, "t");
  for (int i = 1; i < m; ++i) {
    bool ok = elem_sym(Axis::y, i, pts) * G(i) == elem_sym(Axis::x, m - i, pts) * G(i + 1);
    out.push_back(make_check(z_id(m) + "/sigma/i" + std::to_string(i), kSigmaZAnchor, ok));
  }
  out.push_back(make_check(z_id(m) + "/boundary/first", kBoundaryZAnchor,
                           elem_sym(Axis::x, m, pts) * G(2) == t * G(1)));
  out.push_back(make_check(z_id(m) + "/boundary/last", kBoundaryZAnchor,
                           elem_sym(Axis::y, m, pts) * G(m - 1) == t * G(m)));
  return out;
}

/// Point coordinates px_k, py_k, chain coordinates u_k, v_k, Z_1..Z_m,
/// sx_1..sx_m, sy_1..sy_m, t, and an intersection tag w.
inline ContextPtr elimination_context(int m) {
  std::vector<std::string> names;
  for (int k = 1; k <= m; ++k) names.push_back(var_name("px", k));
  for (int k = 1; k <= m; ++k) names.push_back(var_name("py", k));
  for (int k = 1; k < m; ++k) names.push_back(var_name("u", k));
  for (int k = 1; k < m; ++k) names.push_back(var_name("v", k));
  for (int k = 1; k <= m; ++k) names.push_back(var_name("Z", k));
  for (int k = 1; k <= m; ++k) names.push_back(sigma_name(Axis::x, k));
  for (int k = 1; k <= m; ++k) names.push_back(sigma_name(Axis::y, k));
  names.push_back("t");
  names.push_back("w");
  return plain_context(names);
}

namespace detail {

inline Poly sig(const ContextPtr& ctx, Axis a, int k) {
  if (k == 0) return Poly::constant(ctx, 1);
  return Poly::variable(ctx, sigma_name(a, k));
}

}  // namespace detail

/// Generators of both families of symmetric-function relations.
inline std::vector<Poly> sigma_relation_ideal(int m, const ContextPtr& ctx) {
  using detail::sig;
  Poly t = Poly::variable(ctx, "t");
  std::vector<Poly> out;
  for (int j = 1; j <= m; ++j) {
    out.push_back(sig(ctx, Axis::y, m) * sig(ctx, Axis::x, j) - t.pow(j) * sig(ctx, Axis::y, m - j));
    out.push_back(sig(ctx, Axis::x, m) * sig(ctx, Axis::y, j) - t.pow(j) * sig(ctx, Axis::x, m - j));
  }
  for (int i = 0; i <= m; ++i)
    for (int j = 0; i + j <= m; ++j) {
      out.push_back(t.pow(m - i) * sig(ctx, Axis::y, m - j) - t.pow(m - i - j) * sig(ctx, Axis::x, j) * sig(ctx, Axis::y, m));
      out.push_back(t.pow(m - i) * sig(ctx, Axis::x, m - j) - t.pow(m - i - j) * sig(ctx, Axis::y, j) * sig(ctx, Axis::x, m));
    }
  std::vector<Poly> nonzero;
  for (auto& p : out)
    if (!p.is_zero()) nonzero.push_back(std::move(p));
  return nonzero;
}

/// Equations of the model in Z form. With `end_rows`, the two end rows of the
/// (u, v) presentation are included; for m = 1 the model is the surface and
/// the single equation is Z_1 (s^x_1 s^y_1 - t).
inline std::vector<Poly> z_model_ideal(int m, const ContextPtr& ctx, bool end_rows = true) {
  using detail::sig;
  Poly t = Poly::variable(ctx, "t");
  auto Z = [&](int k) { return Poly::variable(ctx, var_name("Z", k)); };
  std::vector<Poly> out;
  if (m == 1) {
    out.push_back(Z(1) * (sig(ctx, Axis::x, 1) * sig(ctx, Axis::y, 1) - t));
    return out;
  }
  for (int i = 1; i <= m; ++i)
    for (int j = i + 2; j <= m; ++j) out.push_back(Z(i) * Z(j) - t.pow(j - i - 1) * Z(i + 1) * Z(j - 1));
  for (int i = 1; i < m; ++i) out.push_back(sig(ctx, Axis::y, i) * Z(i) - sig(ctx, Axis::x, m - i) * Z(i + 1));
  if (end_rows) {
    out.push_back(sig(ctx, Axis::x, m) * Z(2) - t * Z(1));
    out.push_back(sig(ctx, Axis::y, m) * Z(m - 1) - t * Z(m));
  }
  return out;
}

namespace detail {

inline std::vector<std::string> names_of(const char* stem, int from, int to) {
  std::vector<std::string> out;
  for (int k = from; k <= to; ++k) out.push_back(var_name(stem, k));
  return out;
}

/// Intersection over the listed substitutions of the ideals J|_{subst}
/// intersected with the subring free of `elim`.
inline std::vector<Poly> chartwise_elimination(const std::vector<Poly>& J, const ContextPtr& ctx,
                                               const std::vector<std::map<std::string, Poly>>& charts,
                                               const std::vector<std::string>& elim, const Deadline& deadline,
                                               BasisCache* cache) {
  std::optional<std::vector<Poly>> acc;
  for (const auto& chart : charts) {
    std::vector<Poly> dehom;
    for (const auto& g : J) {
      Poly d = g.substitute(chart, ctx);
      if (!d.is_zero()) dehom.push_back(d);
    }
    auto local = eliminate(dehom, ctx, elim, deadline, cache);
    acc = acc ? intersect(*acc, local, ctx, "w", deadline, cache) : local;
  }
  return acc.value_or(std::vector<Poly>{});
}

}  // namespace detail

struct EliminationResult {
  std::vector<Poly> saturated;  // (J : (Z)^inf) intersected with k[s, t]
  std::vector<Poly> raw;        // J intersected with k[s, t]
};

/// Saturation by the irrelevant ideal is computed as the intersection over the
/// affine charts Z_k = 1 of the eliminated ideals.
inline EliminationResult eliminate_z(int m, const std::vector<Poly>& J, const ContextPtr& ctx,
                                     const Deadline& deadline = std::nullopt, BasisCache* cache = nullptr) {
  auto zs = detail::names_of("Z", 1, m);
  std::vector<std::map<std::string, Poly>> charts;
  for (int k = 1; k <= m; ++k) charts.push_back({{var_name("Z", k), Poly::constant(ctx, 1)}});
  EliminationResult r;
  r.raw = eliminate(J, ctx, zs, deadline, cache);
  r.saturated = detail::chartwise_elimination(J, ctx, charts, zs, deadline, cache);
  return r;
}

/// Kernel of k[s, t] -> k[px, py, t]/(px_k py_k - t), s -> elementary
/// symmetric functions: the ideal of the image of the symmetric product.
inline std::vector<Poly> image_ideal(int m, const ContextPtr& ctx, const Deadline& deadline = std::nullopt,
                                     BasisCache* cache = nullptr) {
  Poly t = Poly::variable(ctx, "t");
  std::vector<Poly> gens;
  for (int k = 1; k <= m; ++k)
    gens.push_back(Poly::variable(ctx, var_name("px", k)) * Poly::variable(ctx, var_name("py", k)) - t);
  for (Axis ax : {Axis::x, Axis::y}) {
    std::vector<Poly> e(m + 1, Poly(ctx));
    e[0] = Poly::constant(ctx, 1);
    for (int k = 1; k <= m; ++k) {
      Poly v = Poly::variable(ctx, var_name(ax == Axis::x ? "px" : "py", k));
      for (int j = k; j >= 1; --j) e[j] = e[j] + e[j - 1] * v;
    }
    for (int k = 1; k <= m; ++k) gens.push_back(Poly::variable(ctx, sigma_name(ax, k)) - e[k]);
  }
  auto elim = detail::names_of("px", 1, m);
  for (auto& n : detail::names_of("py", 1, m)) elim.push_back(n);
  return eliminate(gens, ctx, elim, deadline, cache);
}

/// Image of the (u, v) model: H-equations and chain relations with
/// a_i = (-1)^{m-i} s^x_{m-i}, d_i = (-1)^{m-i} s^y_{m-i}, saturated by each
/// (u_k, v_k) through the 2^{m-1} charts, then with u, v eliminated.
inline std::vector<Poly> uv_model_image(int m, const ContextPtr& ctx, const Deadline& deadline = std::nullopt,
                                        BasisCache* cache = nullptr) {
  auto univ = f_generators(m);
  std::map<std::string, Poly> sub;
  for (int k = 0; k < m; ++k) {
    Rational sign = (m - k) % 2 == 0 ? 1 : -1;
    sub.emplace(var_name("a", k), sign * Poly::variable(ctx, sigma_name(Axis::x, m - k)));
    sub.emplace(var_name("d", k), sign * Poly::variable(ctx, sigma_name(Axis::y, m - k)));
  }
  sub.emplace("x", Poly::constant(ctx, 0));
  sub.emplace("y", Poly::constant(ctx, 0));
  std::vector<Poly> H;
  auto hs = h_generators(m, univ.ctx);
  hs.pop_back();  // xy - t: x and y are not coordinates here
  for (const auto& h : hs) H.push_back(h.substitute(sub, ctx));
  auto elim = detail::names_of("u", 1, m - 1);
  for (auto& n : detail::names_of("v", 1, m - 1)) elim.push_back(n);
  std::vector<std::map<std::string, Poly>> charts;
  for (int mask = 0; mask < (1 << (m - 1)); ++mask) {
    std::map<std::string, Poly> c;
    for (int k = 1; k < m; ++k) c.emplace(var_name((mask >> (k - 1)) & 1 ? "u" : "v", k), Poly::constant(ctx, 1));
    charts.push_back(std::move(c));
  }
  return detail::chartwise_elimination(H, ctx, charts, elim, deadline, cache);
}

namespace detail {

struct InclusionReport {
  bool equal = false;
  std::optional<std::string> missing_from_left;   // generator of the right not in the left
  std::optional<std::string> missing_from_right;  // generator of the left not in the right
};

inline InclusionReport double_inclusion(const std::vector<Poly>& left, const std::vector<Poly>& right,
                                        const ContextPtr& ctx, const Deadline& deadline, BasisCache* cache) {
  MonomialOrder order(MonomialOrder::Kind::grevlex);
  auto gl = groebner(left, ctx, order, deadline, cache);
  auto gr = groebner(right, ctx, order, deadline, cache);
  InclusionReport rep;
  if (auto k = gl.first_not_contained(right)) rep.missing_from_left = right[*k].str();
  if (auto k = gr.first_not_contained(left)) rep.missing_from_right = left[*k].str();
  rep.equal = !rep.missing_from_left && !rep.missing_from_right;
  return rep;
}

inline Json inclusion_json(const InclusionReport& r, const char* left, const char* right) {
  Json d;
  d["equal"] = r.equal;
  if (r.missing_from_left) d[std::string("not_in_") + left] = *r.missing_from_left;
  if (r.missing_from_right) d[std::string("not_in_") + right] = *r.missing_from_right;
  return d;
}

inline Json poly_list(const std::vector<Poly>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(p.str());
  return a;
}

}  // namespace detail

/// Three records per m:
///   z-model   saturated elimination of the Z-form model vs the symmetric
///             relations (raw and end-row-free variants in the detail);
///   image     true image ideal vs the symmetric relations;
///   uv-model  saturated elimination of the (u, v) model vs the true image.
/// A mismatch against the true image ideal is `corrected` and carries the
/// computed generators. A Timeout yields skipped records.
inline CheckReport elimination_check(int m, bool slow, double timeout_seconds = 0, BasisCache* cache = nullptr) {
  const std::string base = "elimination/m" + std::to_string(m);
  const char* parts[] = {"z-model", "image", "uv-model"};
  auto skipped = [&](const std::string& reason) {
    CheckReport out;
    for (const char* part : parts) {
      CheckRecord r;
      r.id = base + "/" + part;
      r.anchor = kEliminationAnchor;
      r.status = Status::skipped;
      r.detail["reason"] = reason;
      if (reason == "timeout") r.detail["budget_seconds"] = timeout_seconds;
      out.push_back(std::move(r));
    }
    return out;
  };
  if (m < 1) throw PreconditionFailed("elimination needs m >= 1");
  if (m > 3) return skipped("outside the supported range");
  if (m == 3 && !slow) return skipped("requires --slow");
  Deadline deadline = deadline_after(timeout_seconds);
  try {
    using detail::double_inclusion;
    using detail::inclusion_json;
    auto ctx = elimination_context(m);
    auto sigma = sigma_relation_ideal(m, ctx);
    auto image = image_ideal(m, ctx, deadline, cache);
    auto sigma_vs_image = double_inclusion(sigma, image, ctx, deadline, cache);
    auto mismatch = [&](bool ok, bool truth_ok) {
      return ok ? Status::verified : (truth_ok ? Status::corrected : Status::failed);
    };
    CheckReport out;

    auto res = eliminate_z(m, z_model_ideal(m, ctx, true), ctx, deadline, cache);
    auto sat = double_inclusion(res.saturated, sigma, ctx, deadline, cache);
    auto sat_truth = double_inclusion(res.saturated, image, ctx, deadline, cache);
    {
      CheckRecord r;
      r.id = base + "/z-model";
      r.anchor = kEliminationAnchor;
      r.detail["saturated"] = inclusion_json(sat, "eliminated", "sigma_relations");
      r.detail["saturated_vs_image"] = inclusion_json(sat_truth, "eliminated", "image");
      r.detail["raw"] = inclusion_json(double_inclusion(res.raw, sigma, ctx, deadline, cache), "eliminated",
                                       "sigma_relations");
      if (m >= 2) {
        auto literal = eliminate_z(m, z_model_ideal(m, ctx, false), ctx, deadline, cache);
        r.detail["without_end_rows"] =
            inclusion_json(double_inclusion(literal.saturated, sigma, ctx, deadline, cache), "eliminated",
                           "sigma_relations");
      }
      r.status = mismatch(sat.equal, true);
      if (!sat.equal) r.detail["image_generators"] = detail::poly_list(image);
      out.push_back(std::move(r));
    }
    {
      CheckRecord r;
      r.id = base + "/image";
      r.anchor = kEliminationAnchor;
      r.detail["comparison"] = inclusion_json(sigma_vs_image, "sigma_relations", "image");
      r.detail["image_generators"] = detail::poly_list(image);
      r.status = mismatch(sigma_vs_image.equal, true);
      out.push_back(std::move(r));
    }
    {
      auto uv = uv_model_image(m, ctx, deadline, cache);
      auto cmp = double_inclusion(uv, image, ctx, deadline, cache);
      CheckRecord r;
      r.id = base + "/uv-model";
      r.anchor = kEliminationAnchor;
      r.detail["comparison"] = inclusion_json(cmp, "uv_model", "image");
      r.status = cmp.equal ? Status::verified : Status::failed;
      out.push_back(std::move(r));
    }
    return out;
  } catch (const Timeout&) {
    return skipped("timeout");
  }
}

}  // namespace nodehilb
