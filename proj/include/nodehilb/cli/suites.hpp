#pragma once

// Suite planning and parallel execution.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "nodehilb/cli/certificate.hpp"
#include "nodehilb/hilb/charts.hpp"
#include "nodehilb/hilb/strata.hpp"
#include "nodehilb/hilb/zcoords.hpp"
#include "nodehilb/scroll/scroll.hpp"
#include "nodehilb/sym/symfun.hpp"
#include "nodehilb/sym/vdm.hpp"

namespace nodehilb {

inline constexpr int kHardBound = 8;

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"sigma", "g",          "orders", "eta",     "charts",
                                              "z",     "elimination", "strata", "scrolls", "all"};
  return names;
}

struct SuiteParams {
  std::optional<int> m, n, j, k;
  bool slow = false;
  double timeout_seconds = 0;
  bool allow_large = false;

  Json to_json() const {
    Json p = Json::object();
    if (m) p["m"] = *m;
    if (n) p["n"] = *n;
    if (j) p["j"] = *j;
    if (k) p["k"] = *k;
    p["slow"] = slow;
    if (timeout_seconds > 0) p["timeout"] = timeout_seconds;
    return p;
  }
};

struct RunConfig {
  int jobs = 1;
  BasisCache* cache = nullptr;
  bool measure = false;
};

struct Task {
  std::string label;
  std::function<CheckReport()> run;
};

/// Digit runs compare numerically, so m10 sorts after m9.
inline bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
      while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
      std::string x = a.substr(i, i2 - i), y = b.substr(j, j2 - j);
      x.erase(0, std::min(x.find_first_not_of('0'), x.size() - 1));
      y.erase(0, std::min(y.find_first_not_of('0'), y.size() - 1));
      if (x.size() != y.size()) return x.size() < y.size();
      if (x != y) return x < y;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

namespace detail {

struct Range {
  int lo, hi;
};

/// The sweep for one suite: a single value if the flag is given, else the default.
inline Range pick(const std::optional<int>& given, int lo, int hi) {
  if (given) return {*given, *given};
  return {lo, hi};
}

inline void check_bound(const char* name, const std::optional<int>& v, int lo, const SuiteParams& p) {
  if (!v) return;
  if (*v < lo) throw UsageError(std::string("--") + name + " must be at least " + std::to_string(lo));
  if (*v > kHardBound && !p.allow_large)
    throw UsageError(std::string("--") + name + " above " + std::to_string(kHardBound) +
                     " requires --allow-large");
}

inline void plan_sigma(const SuiteParams& p, std::vector<Task>& out) {
  auto r = pick(p.m, 1, 6);
  for (int m = r.lo; m <= r.hi; ++m) {
    out.push_back({"sigma/m" + std::to_string(m), [m] { return verify_sigma_relations(m); }});
    if (m <= 4) out.push_back({"sigma/m" + std::to_string(m) + "/express", [m] { return sigma_express_check(m, 100, 1); }});
  }
}

inline void plan_g(const SuiteParams& p, std::vector<Task>& out) {
  auto r = pick(p.m, 1, 6);
  for (int m = r.lo; m <= r.hi; ++m) {
    out.push_back({"g/forms", [m] { return verify_g_forms(m); }});
    out.push_back({"g/recurrence", [m] { return verify_g_recurrence(m); }});
    out.push_back({"g/syzygies", [m] { return verify_g_syzygies(m); }});
    if (m <= 5) out.push_back({"g/discriminant", [m] { return verify_discriminant(m); }});
    if (m <= 4)
      for (int kx = 0; kx < m; ++kx)
        for (int ky = 0; kx + ky < m; ++ky)
          for (int j = 1; j <= m - kx - ky; ++j)
            out.push_back({"g/localization", [=] { return localization_factorization(m, kx, ky, j); }});
  }
}

inline void plan_orders(const SuiteParams& p, std::vector<Task>& out) {
  auto r = pick(p.m, 2, 6);
  for (int m = r.lo; m <= r.hi; ++m) out.push_back({"orders", [m] { return verify_theta_orders(m); }});
}

inline void plan_eta(const SuiteParams& p, std::vector<Task>& out) {
  auto r = pick(p.m, 1, 5);
  for (int m = r.lo; m <= r.hi; ++m) out.push_back({"eta", [m] { return eta_check(m); }});
}

inline void plan_charts(const SuiteParams& p, const RunConfig& cfg, std::vector<Task>& out) {
  auto r = pick(p.m, 1, 4);
  BasisCache* cache = cfg.cache;
  for (int m = r.lo; m <= r.hi; ++m) {
    out.push_back({"charts/m" + std::to_string(m), [m, cache] {
                     CheckReport rep;
                     std::vector<ChartPresentation> charts;
                     for (int i = 1; i <= m; ++i) {
                       charts.push_back(make_chart(m, i, std::nullopt, cache));
                       append(rep, chart_multiplication_check(charts.back()));
                     }
                     append(rep, verify_f_relations(m, charts));
                     return rep;
                   }});
  }
}

inline void plan_z(const SuiteParams& p, std::vector<Task>& out) {
  auto r = pick(p.m, 2, 6);
  for (int m = r.lo; m <= r.hi; ++m) out.push_back({"z", [m] { return z_relations_check(m, m <= 5); }});
}

inline void plan_elimination(const SuiteParams& p, const RunConfig& cfg, std::vector<Task>& out) {
  auto r = pick(p.m, 1, 3);
  BasisCache* cache = cfg.cache;
  bool slow = p.slow;
  double timeout = p.timeout_seconds;
  for (int m = r.lo; m <= r.hi; ++m)
    out.push_back({"elimination", [=] { return elimination_check(m, slow, timeout, cache); }});
}

inline void plan_strata(const SuiteParams& p, std::vector<Task>& out) {
  auto r = pick(p.m, 1, 6);
  for (int m = r.lo; m <= r.hi; ++m) {
    out.push_back({"strata/fibres", [m] {
                     CheckReport rep;
                     for (int a = 0; a <= m - 1; ++a)
                       for (int b = 0; a + b <= m - 1; ++b) append(rep, verify_fiber(m, a, b));
                     return rep;
                   }});
    out.push_back({"strata/punctual", [m] { return verify_punctual_lengths(m); }});
  }
  auto nr = pick(p.n, 2, 5);
  for (int n = nr.lo; n <= nr.hi; ++n) {
    auto jr = pick(p.j, 1, n - 1);
    for (int j = jr.lo; j <= jr.hi; ++j)
      if (j >= 1 && j < n) out.push_back({"strata/interp", [n, j] { return interpolating_section_check(n, j); }});
  }
}

inline void plan_scrolls(const SuiteParams& p, std::vector<Task>& out) {
  auto nr = pick(p.n, 1, 8);
  for (int n = nr.lo; n <= nr.hi; ++n) {
    out.push_back({"scrolls/swap", [n] { return d_class_symmetry(n); }});
    auto jr = pick(p.j, 1, n - 1);
    for (int j = jr.lo; j <= jr.hi && j < n; ++j) {
      int m = p.k ? n + *p.k : 12;
      if (p.m) m = *p.m;
      if (m < n) continue;
      out.push_back({"scrolls/node", [=] { return node_scroll_check(n, j, m); }});
      out.push_back({"scrolls/local-global", [=] { return local_global_consistency(n, j); }});
    }
  }
  auto mr = pick(p.m, 2, 12);
  for (int m = mr.lo; m <= mr.hi; ++m) {
    out.push_back({"scrolls/poly", [m] {
                     CheckReport rep;
                     std::vector<int> parts;
                     auto rec = [&](auto&& self, int left) -> void {
                       if (!parts.empty()) {
                         std::vector<int> js;
                         for (std::size_t i = 0; i < parts.size(); ++i)
                           js.push_back(static_cast<int>(i) % (parts[i] - 1) + 1);
                         append(rep, polyscroll_check(parts, js, m));
                       }
                       for (int q = 2; q <= left; ++q) {
                         parts.push_back(q);
                         self(self, left - q);
                         parts.pop_back();
                       }
                     };
                     rec(rec, m);
                     return rep;
                   }});
  }
  auto rr = pick(p.m, 1, 5);
  for (int m = rr.lo; m <= std::min(rr.hi, 5); ++m)
    for (int n = 1; n <= m; ++n)
      for (int j = 1; j <= m; ++j) {
        if ((p.n && *p.n != n) || (p.j && *p.j != j)) continue;
        out.push_back({"scrolls/restriction", [=] { return restriction_factorization(m, n, j); }});
      }
}

}  // namespace detail

inline std::vector<Task> plan_suite(const std::string& suite, const SuiteParams& p, const RunConfig& cfg) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw UsageError("unknown suite: " + suite);
  detail::check_bound("m", p.m, 1, p);
  detail::check_bound("n", p.n, 1, p);
  detail::check_bound("j", p.j, 1, p);
  detail::check_bound("k", p.k, 0, p);
  if (p.timeout_seconds < 0) throw UsageError("--timeout must be non-negative");
  std::vector<Task> out;
  bool all = suite == "all";
  if (all || suite == "sigma") detail::plan_sigma(p, out);
  if (all || suite == "g") detail::plan_g(p, out);
  if (all || suite == "orders") detail::plan_orders(p, out);
  if (all || suite == "eta") detail::plan_eta(p, out);
  if (all || suite == "charts") detail::plan_charts(p, cfg, out);
  if (all || suite == "z") detail::plan_z(p, out);
  if (all || suite == "elimination") detail::plan_elimination(p, cfg, out);
  if (all || suite == "strata") detail::plan_strata(p, out);
  if (all || suite == "scrolls") detail::plan_scrolls(p, out);
  return out;
}

/// Runs the tasks on `cfg.jobs` workers. Errors thrown by a task become one
/// failed record; check ids are sorted naturally before emission.
inline Certificate run_suite(const std::string& suite, const SuiteParams& p, const RunConfig& cfg) {
  auto tasks = plan_suite(suite, p, cfg);
  std::vector<CheckReport> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      auto start = std::chrono::steady_clock::now();
      CheckReport rep;
      try {
        rep = tasks[i].run();
      } catch (const Timeout&) {
        CheckRecord r{tasks[i].label + "/task" + std::to_string(i), {tasks[i].label, ""}, Status::skipped, {}, 0};
        r.detail["reason"] = "timeout";
        rep.push_back(std::move(r));
      } catch (const std::exception& e) {
        CheckRecord r{tasks[i].label + "/task" + std::to_string(i), {tasks[i].label, ""}, Status::failed, {}, 0};
        r.detail["error"] = e.what();
        rep.push_back(std::move(r));
      }
      if (cfg.measure) {
        long long ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                           .count();
        for (auto& r : rep) r.millis = ms;
      }
      results[i] = std::move(rep);
    }
  };
  const int jobs = std::max(1, cfg.jobs);
  std::vector<std::thread> pool;
  for (int w = 1; w < jobs; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Certificate cert;
  cert.version = kEngineVersion;
  cert.suite = suite;
  cert.params = p.to_json();
  for (auto& r : results) append(cert.checks, std::move(r));
  std::stable_sort(cert.checks.begin(), cert.checks.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return natural_less(a.id, b.id); });
  for (std::size_t i = 1; i < cert.checks.size(); ++i)
    if (cert.checks[i].id == cert.checks[i - 1].id) throw Error("duplicate check id " + cert.checks[i].id);
  cert.environment["engine"] = std::string("nodehilb ") + kEngineVersion;
  cert.environment["measured"] = cfg.measure;
  if (cfg.measure) cert.environment["threads"] = jobs;
  return cert;
}

}  // namespace nodehilb
