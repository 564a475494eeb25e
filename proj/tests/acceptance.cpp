// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "nodehilb/cli/certificate.hpp"
#include "nodehilb/cli/suites.hpp"

using namespace nodehilb;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string note;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

int count(const CheckReport& r, Status s) {
  int n = 0;
  for (const auto& c : r) n += c.status == s;
  return n;
}

std::string first_bad(const CheckReport& r, Status allowed_worst) {
  for (const auto& c : r)
    if (severity(c.status) > severity(allowed_worst)) return c.id + " " + to_string(c.status);
  return "";
}

Certificate run(const std::string& suite, SuiteParams p = {}, int jobs = 4) {
  return run_suite(suite, p, {jobs, nullptr, false});
}

Outcome sigma_relations() {
  auto t0 = Clock::now();
  CheckReport all;
  for (int m = 1; m <= 6; ++m) append(all, verify_sigma_relations(m));
  double s = seconds_since(t0);
  auto bad = first_bad(all, Status::verified);
  return {bad.empty() && s < 10 && !all.empty(),
          std::to_string(all.size()) + " instances in " + fmt_seconds(s) + (bad.empty() ? "" : ", " + bad)};
}

Outcome sigma_expression() {
  std::mt19937 rng(20261015);
  int tried = 0;
  for (int m = 1; m <= 4; ++m) {
    auto ctx = points_context(m);
    for (int s = 0; s < 100; ++s) {
      Poly p = symmetrize(random_point_poly(ctx, rng, 4, 6));
      if (!is_invariant(p) || p.total_degree() > 6)
        return {false, "generator produced a bad invariant at m=" + std::to_string(m)};
      SigmaExpr e = sigma_express(p);
      if (evaluate_sigma(e.expr, ctx) != p) return {false, "mismatch at m=" + std::to_string(m) + " sample " + std::to_string(s)};
      ++tried;
    }
  }
  return {tried == 400, std::to_string(tried) + " random invariants of degree <= 6 reconstructed"};
}

Outcome g_identities() {
  auto t0 = Clock::now();
  CheckReport all;
  CheckReport recurrence;
  for (int m = 1; m <= 6; ++m) {
    append(all, verify_g_forms(m));
    append(recurrence, verify_g_recurrence(m));
    append(all, verify_g_syzygies(m));
  }
  double s = seconds_since(t0);
  auto bad = first_bad(all, Status::verified);
  // The recurrence holds exactly with a sign that differs from the printed one;
  // such instances carry the computed sign and are reported as corrected.
  int resigned = 0;
  for (const auto& c : recurrence) {
    if (c.status == Status::corrected && c.detail.contains("computed_sign")) {
      ++resigned;
      continue;
    }
    if (c.status != Status::verified && bad.empty()) bad = c.id + " " + to_string(c.status);
  }
  return {bad.empty() && s < 60, std::to_string(all.size() + recurrence.size()) + " checks in " + fmt_seconds(s) +
                                     ", " + std::to_string(resigned) + " recurrence instances with corrected sign" +
                                     (bad.empty() ? "" : ", " + bad)};
}

Outcome theta_orders() {
  auto ctx = points_context(3);
  int anchor = theta_valuation(det(mixed_vdm(ctx, 1)), {1});
  if (anchor != 1) return {false, "(3, 1, {1}) has order " + std::to_string(anchor)};
  int cells = 0, printed = 0, candidate = 0;
  for (int m = 2; m <= 6; ++m) {
    for (const auto& c : verify_theta_orders(m)) {
      if (c.status == Status::failed) return {false, c.id + " failed"};
      if (!c.detail.contains("order")) continue;
      if (c.detail["order"].get<int>() < 0) return {false, c.id + " negative"};
      if (!c.detail.contains("matches_printed") || !c.detail.contains("matches_candidate"))
        return {false, c.id + " lacks the per-cell comparison"};
      ++cells;
      printed += c.detail["matches_printed"].get<bool>();
      candidate += c.detail["matches_candidate"].get<bool>();
    }
  }
  return {true, "anchor order 1; " + std::to_string(cells) + " cells, " + std::to_string(printed) +
                    " match printed, " + std::to_string(candidate) + " match candidate"};
}

Outcome eta_generators() {
  int cells = 0;
  for (int m = 1; m <= 5; ++m)
    for (const auto& c : eta_check(m)) {
      if (c.status == Status::failed) return {false, c.id + " failed"};
      if (c.detail.contains("computed_exponents")) {
        if (c.detail["computed_exponents"].size() != 1) return {false, c.id + " exponent not unique"};
        ++cells;
      }
    }
  for (const auto& c : eta_check(2)) {
    if (c.id != "eta/m2/i2/j1") continue;
    bool ok = c.detail["exponent"] == 1 && c.detail["printed_exponent"] == 0 && c.status == Status::corrected;
    return {ok && cells > 0, std::to_string(cells) + " unique exponents; m=2 (2,1) exponent " +
                                 c.detail["exponent"].dump() + " reported " + to_string(c.status)};
  }
  return {false, "eta/m2/i2/j1 missing"};
}

Outcome charts() {
  auto t0 = Clock::now();
  CheckReport all;
  for (int m = 1; m <= 4; ++m) {
    std::vector<ChartPresentation> cs;
    for (int i = 1; i <= m; ++i) {
      cs.push_back(make_chart(m, i));
      append(all, chart_multiplication_check(cs.back()));
    }
    append(all, verify_f_relations(m, cs));
  }
  double s = seconds_since(t0);
  auto bad = first_bad(all, Status::verified);
  return {bad.empty() && s < 120, std::to_string(all.size()) + " checks in " + fmt_seconds(s) + (bad.empty() ? "" : ", " + bad)};
}

Outcome z_relations() {
  CheckReport all;
  for (int m = 2; m <= 6; ++m) append(all, z_relations_check(m, m <= 5));
  auto bad = first_bad(all, Status::verified);
  return {bad.empty() && !all.empty(), std::to_string(all.size()) + " checks" + (bad.empty() ? "" : ", " + bad)};
}

Outcome elimination() {
  auto t0 = Clock::now();
  CheckReport small;
  append(small, elimination_check(1, false));
  append(small, elimination_check(2, false));
  double s = seconds_since(t0);
  for (const auto& c : small)
    if (c.id.ends_with("z-model") && c.status != Status::verified) return {false, c.id + " " + to_string(c.status)};
  if (s >= 60) return {false, "m <= 2 took " + fmt_seconds(s)};
  auto t1 = Clock::now();
  auto slow = elimination_check(3, true, 900);
  double s3 = seconds_since(t1);
  if (count(slow, Status::failed) > 0) return {false, "m=3 " + first_bad(slow, Status::skipped)};
  return {true, "m <= 2 in " + fmt_seconds(s) + "; m=3 in " + fmt_seconds(s3) + " (" +
                    std::to_string(count(slow, Status::verified)) + " verified, " +
                    std::to_string(count(slow, Status::corrected)) + " corrected, " +
                    std::to_string(count(slow, Status::skipped)) + " skipped)"};
}

Outcome strata() {
  int fibres = 0;
  for (int m = 1; m <= 6; ++m) {
    for (int a = 0; a <= m - 1; ++a)
      for (int b = 0; a + b <= m - 1; ++b) {
        auto r = verify_fiber(m, a, b);
        if (r.empty() || r[0].status != Status::verified) return {false, "fibre range at " + std::to_string(m)};
        ++fibres;
      }
    auto len = verify_punctual_lengths(m);
    if (auto bad = first_bad(len, Status::verified); !bad.empty()) return {false, bad};
  }
  for (int n = 2; n <= 5; ++n)
    for (int j = 1; j < n; ++j)
      if (auto bad = first_bad(interpolating_section_check(n, j), Status::verified); !bad.empty()) return {false, bad};
  return {true, std::to_string(fibres) + " fibres; punctual lengths and interpolating sections exact"};
}

Outcome scrolls() {
  auto t0 = Clock::now();
  CheckReport all;
  for (int n = 1; n <= 8; ++n) {
    append(all, d_class_symmetry(n));
    for (int j = 1; j < n; ++j) append(all, local_global_consistency(n, j));
  }
  for (int m = 2; m <= 12; ++m) {
    std::vector<int> parts;
    std::function<void(int)> rec = [&](int left) {
      if (!parts.empty()) {
        std::vector<int> js;
        for (std::size_t i = 0; i < parts.size(); ++i) js.push_back(static_cast<int>(i) % (parts[i] - 1) + 1);
        append(all, polyscroll_check(parts, js, m));
      }
      for (int q = 2; q <= left && q <= 8; ++q) {
        parts.push_back(q);
        rec(left - q);
        parts.pop_back();
      }
    };
    rec(m);
  }
  if (auto bad = first_bad(all, Status::verified); !bad.empty()) return {false, bad};
  int restrictions = 0, reported = 0;
  for (int m = 1; m <= 5; ++m)
    for (int n = 1; n <= m; ++n)
      for (int j = 1; j <= m; ++j) {
        auto r = restriction_factorization(m, n, j);
        if (r.size() != 1 || r[0].status != Status::verified) return {false, "restriction m=" + std::to_string(m)};
        ++restrictions;
        bool has = true;
        for (const char* k : {"w_diagonals", "z_diagonals", "free_diagonals", "x_branch_order", "y_branch_order"})
          has = has && r[0].detail.contains(k) && r[0].detail[k].contains("printed") &&
                r[0].detail[k].contains("computed");
        reported += has;
      }
  double s = seconds_since(t0);
  return {reported == restrictions, std::to_string(all.size()) + " class identities, " + std::to_string(restrictions) +
                                        " nonzero restrictions with factor counts, " + fmt_seconds(s)};
}

Outcome determinism() {
  std::string a = emit_json(run("all", {}, 1));
  std::string b = emit_json(run("all", {}, 1));
  auto cert = run("all", {}, 8);
  std::string c = emit_json(cert);
  int code = exit_code(cert.checks);
  bool orders = false, eta = false;
  for (const auto& r : cert.checks) {
    orders = orders || (r.id.starts_with("orders/") && r.status == Status::corrected);
    eta = eta || (r.id.starts_with("eta/") && r.status == Status::corrected);
  }
  bool same = a == b && b == c;
  return {same && code == 1 && orders && eta,
          std::string(same ? "byte-identical" : "outputs differ") + " across runs and 1/8 workers; exit code " +
              std::to_string(code) + "; " + std::to_string(cert.checks.size()) + " checks"};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"symmetric-function relations", sigma_relations},
      {"sigma-expression soundness", sigma_expression},
      {"G identities", g_identities},
      {"Theta order table", theta_orders},
      {"eta generators", eta_generators},
      {"charts and flatness", charts},
      {"Z relations", z_relations},
      {"elimination", elimination},
      {"strata and punctual schemes", strata},
      {"scroll calculus", scrolls},
      {"determinism", determinism},
  };
  int failures = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %2d %-30s %s  %s\n", index, name, o.pass ? "PASS" : "FAIL", o.note.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
