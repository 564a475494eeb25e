#pragma once

// Variable registries and ring contexts.
//
// A context describes the ambient ring
//   Q[x_1..x_m, y_1..y_m, t, extras][localized^-1] / (x_i y_i - t)
// where the pairs (x_i, y_i) are detected from the variable kinds. A context
// without pairs and without localized variables is a plain polynomial ring.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nodehilb/errors.hpp"

namespace nodehilb {

enum class VarKind {
  x,        // x-coordinate of a point, with index
  y,        // y-coordinate of a point, with index
  t,        // family parameter
  chart_u,
  chart_v,
  chart_a,
  chart_d,
  z_proj,   // projective Z-coordinate
  sigma,    // abstract elementary symmetric symbol
  aux,      // anything else (parameters of substitutions, tags)
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::aux;
  int index = 0;
};

class Registry {
 public:
  Registry() = default;

  int add(std::string name, VarKind kind = VarKind::aux, int index = 0) {
    if (frozen_) throw Error("registry is frozen; cannot add " + name);
    if (name.empty()) throw Error("empty variable name");
    if (find(name)) throw Error("duplicate variable name: " + name);
    vars_.push_back({std::move(name), kind, index});
    return static_cast<int>(vars_.size()) - 1;
  }

  /// Fixes the order; every x-index must have a matching y-index.
  void freeze() {
    std::map<int, int> xs, ys;
    for (const auto& v : vars_) {
      if (v.kind == VarKind::x && !xs.emplace(v.index, 0).second)
        throw Error("duplicate x-index " + std::to_string(v.index));
      if (v.kind == VarKind::y && !ys.emplace(v.index, 0).second)
        throw Error("duplicate y-index " + std::to_string(v.index));
    }
    for (const auto& [i, _] : xs)
      if (!ys.contains(i)) throw Error("x-index without y partner: " + std::to_string(i));
    for (const auto& [i, _] : ys)
      if (!xs.contains(i)) throw Error("y-index without x partner: " + std::to_string(i));
    frozen_ = true;
  }

  bool frozen() const noexcept { return frozen_; }
  std::size_t size() const noexcept { return vars_.size(); }
  const Variable& operator[](std::size_t i) const { return vars_.at(i); }
  const std::vector<Variable>& variables() const noexcept { return vars_; }

  std::optional<int> find(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == name) return static_cast<int>(i);
    return std::nullopt;
  }

 private:
  std::vector<Variable> vars_;
  bool frozen_ = false;
};

class Context;
using ContextPtr = std::shared_ptr<const Context>;

class Context {
 public:
  /// Builds a context over a (frozen on entry) registry.
  static ContextPtr create(Registry reg, std::span<const std::string> localized = {}) {
    if (!reg.frozen()) reg.freeze();
    auto ctx = std::shared_ptr<Context>(new Context(std::move(reg)));
    for (const auto& name : localized) ctx->localized_.at(ctx->id(name)) = true;
    ctx->finish();
    return ctx;
  }

  const Registry& registry() const noexcept { return reg_; }
  std::size_t size() const noexcept { return reg_.size(); }
  const std::string& name(int var) const { return reg_[var].name; }
  VarKind kind(int var) const { return reg_[var].kind; }

  int id(std::string_view name) const {
    auto v = reg_.find(name);
    if (!v) throw UnknownVariable("unknown variable: " + std::string(name));
    return *v;
  }
  std::optional<int> find(std::string_view name) const { return reg_.find(name); }

  /// Number of (x_i, y_i) pairs, i.e. the point count m.
  int pair_count() const noexcept { return static_cast<int>(pair_x_.size()); }
  /// Pair slot (0-based) of a coordinate variable, or -1.
  int pair_of(int var) const { return pair_slot_.at(var); }
  int x_var(int slot) const { return pair_x_.at(slot); }
  int y_var(int slot) const { return pair_y_.at(slot); }
  /// Registry index (1-based point label) of a pair slot.
  int pair_label(int slot) const { return reg_[pair_x_.at(slot)].index; }
  /// Slot holding the point labelled `label`.
  int slot_of_label(int label) const {
    for (int s = 0; s < pair_count(); ++s)
      if (pair_label(s) == label) return s;
    throw IndexOutOfRange("no point labelled " + std::to_string(label));
  }
  int t() const noexcept { return t_; }
  bool localized(int var) const { return localized_.at(var); }
  bool any_localized() const noexcept {
    return std::any_of(localized_.begin(), localized_.end(), [](bool b) { return b; });
  }
  bool plain() const noexcept { return pair_x_.empty() && !any_localized(); }

  /// Structural identity used for context equality.
  const std::string& fingerprint() const noexcept { return fingerprint_; }

  bool same_as(const Context& other) const noexcept {
    return this == &other || fingerprint_ == other.fingerprint_;
  }

  std::vector<std::string> localized_names() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (localized_[i]) out.push_back(reg_[i].name);
    return out;
  }

 private:
  explicit Context(Registry reg) : reg_(std::move(reg)), localized_(reg_.size(), false) {}

  void finish() {
    pair_slot_.assign(size(), -1);
    std::map<int, int> xs, ys;
    for (std::size_t i = 0; i < size(); ++i) {
      const auto& v = reg_[i];
      if (v.kind == VarKind::x) xs[v.index] = static_cast<int>(i);
      if (v.kind == VarKind::y) ys[v.index] = static_cast<int>(i);
      if (v.kind == VarKind::t) {
        if (t_ >= 0) throw Error("more than one t variable");
        t_ = static_cast<int>(i);
      }
    }
    for (const auto& [label, xv] : xs) {
      pair_slot_[xv] = static_cast<int>(pair_x_.size());
      pair_slot_[ys.at(label)] = static_cast<int>(pair_x_.size());
      pair_x_.push_back(xv);
      pair_y_.push_back(ys.at(label));
    }
    if (!pair_x_.empty() && t_ < 0) throw Error("point coordinates need a t variable");
    if (t_ >= 0 && localized_[t_]) throw Error("t cannot be localized");
    fingerprint_.clear();
    for (std::size_t i = 0; i < size(); ++i) {
      fingerprint_ += reg_[i].name;
      fingerprint_ += ':';
      fingerprint_ += std::to_string(static_cast<int>(reg_[i].kind));
      fingerprint_ += localized_[i] ? "!" : "";
      fingerprint_ += ';';
    }
  }

  Registry reg_;
  std::vector<bool> localized_;
  std::vector<int> pair_slot_;
  std::vector<int> pair_x_, pair_y_;
  int t_ = -1;
  std::string fingerprint_;
};

/// Returns a context equal to `ctx` with the listed variables made invertible.
inline ContextPtr localize(const ContextPtr& ctx, std::span<const std::string> vars) {
  if (vars.empty()) return ctx;
  std::vector<std::string> all = ctx->localized_names();
  for (const auto& v : vars) {
    ctx->id(v);
    if (std::find(all.begin(), all.end(), v) == all.end()) all.push_back(v);
  }
  return Context::create(ctx->registry(), all);
}

inline ContextPtr localize(const ContextPtr& ctx, std::initializer_list<std::string> vars) {
  std::vector<std::string> v(vars);
  return localize(ctx, std::span<const std::string>(v));
}

/// Plain polynomial ring on the given names, all of kind aux unless a kind
/// is implied by a leading letter convention the caller does not need.
inline ContextPtr plain_context(const std::vector<std::string>& names) {
  Registry reg;
  for (const auto& n : names) reg.add(n);
  return Context::create(std::move(reg));
}

/// x1..xm, y1..ym, t, followed by `extra` auxiliary variables.
inline ContextPtr points_context(int m, const std::vector<std::string>& extra = {}) {
  if (m < 0) throw IndexOutOfRange("negative point count");
  Registry reg;
  for (int i = 1; i <= m; ++i) reg.add("x" + std::to_string(i), VarKind::x, i);
  for (int i = 1; i <= m; ++i) reg.add("y" + std::to_string(i), VarKind::y, i);
  reg.add("t", VarKind::t);
  for (const auto& e : extra) reg.add(e);
  return Context::create(std::move(reg));
}

}  // namespace nodehilb
