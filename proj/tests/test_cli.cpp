#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "nodehilb/cli/cache.hpp"
#include "nodehilb/cli/certificate.hpp"
#include "nodehilb/cli/suites.hpp"

using namespace nodehilb;

namespace {

CheckRecord rec(std::string id, Status s) { return {std::move(id), {"loc", "q"}, s, Json::object(), 0}; }

std::filesystem::path scratch_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("nodehilb-test-" + name);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST(Certificate, KeyOrderAndRoundTrip) {
  Certificate c;
  c.version = kEngineVersion;
  c.suite = "sigma";
  c.params["m"] = 3;
  c.checks.push_back(rec("sigma/m3/a", Status::corrected));
  c.checks.back().detail["big"] = json_integer(mpz_class("123456789012345678901234567890"));
  c.checks.back().detail["small"] = json_integer(mpz_class(-42));
  std::string text = emit_json(c);
  auto v = c.to_json();
  std::vector<std::string> keys;
  for (auto it = v.begin(); it != v.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"version", "suite", "params", "checks", "environment"}));
  std::vector<std::string> check_keys;
  for (auto it = v["checks"][0].begin(); it != v["checks"][0].end(); ++it) check_keys.push_back(it.key());
  EXPECT_EQ(check_keys, (std::vector<std::string>{"id", "anchor", "status", "detail", "millis"}));
  EXPECT_NE(text.find("\"123456789012345678901234567890\""), std::string::npos);
  EXPECT_NE(text.find("-42"), std::string::npos);

  Certificate back = parse_certificate(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(emit_json(back), text);
  EXPECT_THROW(parse_certificate("{"), ParseError);
  EXPECT_THROW(parse_certificate("{\"version\": 1}"), ParseError);
}

TEST(Certificate, JsonIntegerBoundary) {
  mpz_class max64("9223372036854775807");
  EXPECT_TRUE(json_integer(max64).is_number_integer());
  EXPECT_TRUE(json_integer(max64 + 1).is_string());
  EXPECT_EQ(json_integer(max64 + 1).get<std::string>(), "9223372036854775808");
}

TEST(Certificate, TextTable) {
  Certificate c;
  c.version = "1.0.0";
  c.suite = "eta";
  c.checks = {rec("a", Status::verified), rec("bb", Status::corrected), rec("c", Status::failed),
              rec("d", Status::skipped)};
  std::string t = emit_text(c);
  EXPECT_NE(t.find("[ok] a   verified  loc\n"), std::string::npos);
  EXPECT_NE(t.find("[~~] bb  corrected  loc\n"), std::string::npos);
  EXPECT_NE(t.find("[!!] c"), std::string::npos);
  EXPECT_NE(t.find("[--] d"), std::string::npos);
  EXPECT_NE(t.find("1 verified, 1 corrected, 1 failed, 1 skipped"), std::string::npos);
}

TEST(Certificate, ExitCodes) {
  EXPECT_EQ(exit_code({}), 0);
  EXPECT_EQ(exit_code({rec("a", Status::verified)}), 0);
  EXPECT_EQ(exit_code({rec("a", Status::verified), rec("b", Status::corrected)}), 1);
  EXPECT_EQ(exit_code({rec("a", Status::skipped)}), 1);
  EXPECT_EQ(exit_code({rec("a", Status::corrected), rec("b", Status::failed)}), 2);
}

TEST(Suites, NaturalOrder) {
  EXPECT_TRUE(natural_less("eta/m2/i2", "eta/m2/i10"));
  EXPECT_FALSE(natural_less("eta/m2/i10", "eta/m2/i2"));
  EXPECT_TRUE(natural_less("g/m5", "g/m6"));
  EXPECT_TRUE(natural_less("a", "ab"));
  EXPECT_FALSE(natural_less("x", "x"));
}

TEST(Suites, UsageErrors) {
  RunConfig cfg;
  EXPECT_THROW(run_suite("nope", {}, cfg), UsageError);
  SuiteParams big;
  big.m = 9;
  EXPECT_THROW(run_suite("sigma", big, cfg), UsageError);
  SuiteParams zero;
  zero.m = 0;
  EXPECT_THROW(run_suite("sigma", zero, cfg), UsageError);
  SuiteParams neg;
  neg.timeout_seconds = -1;
  EXPECT_THROW(run_suite("sigma", neg, cfg), UsageError);
  SuiteParams allowed;
  allowed.n = 10;
  allowed.j = 3;
  allowed.m = 12;
  allowed.allow_large = true;
  EXPECT_NO_THROW(plan_suite("scrolls", allowed, cfg));
}

TEST(Suites, SingleMSelectsOneValue) {
  SuiteParams p;
  p.m = 2;
  auto cert = run_suite("sigma", p, {});
  ASSERT_FALSE(cert.checks.empty());
  for (const auto& c : cert.checks) EXPECT_EQ(c.id.rfind("sigma/m2/", 0), 0u) << c.id;
  EXPECT_EQ(cert.params["m"], 2);
  EXPECT_EQ(cert.params["slow"], false);
  EXPECT_EQ(exit_code(cert.checks), 0);
}

TEST(Suites, DeterministicAcrossWorkers) {
  SuiteParams p;
  p.m = 3;
  RunConfig one{1, nullptr, false}, many{8, nullptr, false};
  for (const char* s : {"eta", "strata", "charts", "scrolls"}) {
    auto a = emit_json(run_suite(s, p, one));
    auto b = emit_json(run_suite(s, p, many));
    EXPECT_EQ(a, b) << s;
  }
}

TEST(Suites, TimeoutBecomesSkipped) {
  SuiteParams p;
  p.m = 3;
  p.slow = true;
  p.timeout_seconds = 1e-6;
  auto cert = run_suite("elimination", p, {});
  ASSERT_FALSE(cert.checks.empty());
  for (const auto& c : cert.checks) EXPECT_EQ(c.status, Status::skipped) << c.id;
  EXPECT_EQ(exit_code(cert.checks), 1);
}

TEST(Suites, MeasureOnlyChangesTimingFields) {
  SuiteParams p;
  p.m = 2;
  auto plain = run_suite("z", p, {1, nullptr, false});
  auto timed = run_suite("z", p, {1, nullptr, true});
  EXPECT_FALSE(plain.environment.contains("threads"));
  EXPECT_TRUE(timed.environment.contains("threads"));
  ASSERT_EQ(plain.checks.size(), timed.checks.size());
  for (std::size_t i = 0; i < plain.checks.size(); ++i) EXPECT_EQ(plain.checks[i].id, timed.checks[i].id);
}

TEST(Cache, StoreLoadAndMismatch) {
  auto dir = scratch_dir("store");
  FileCache cache(dir);
  EXPECT_FALSE(cache.load("k1"));
  cache.store("k1", {"x^2 - t", "y"});
  auto got = cache.load("k1");
  ASSERT_TRUE(got);
  EXPECT_EQ(*got, (std::vector<std::string>{"x^2 - t", "y"}));
  EXPECT_EQ(cache.hits(), 1);
  EXPECT_EQ(cache.misses(), 1);

  // A file whose recorded key differs is ignored.
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    std::ofstream out(e.path(), std::ios::trunc);
    out << R"({"key":"other","basis":["1"]})";
  }
  EXPECT_FALSE(cache.load("k1"));
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    std::ofstream out(e.path(), std::ios::trunc);
    out << "not json";
  }
  EXPECT_FALSE(cache.load("k1"));
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_EQ(files, 1u);
  std::filesystem::remove_all(dir);
}

TEST(Cache, ChartsReuseBases) {
  auto dir = scratch_dir("charts");
  SuiteParams p;
  p.m = 2;
  std::string first, second;
  {
    FileCache cache(dir);
    first = emit_json(run_suite("charts", p, {2, &cache, false}));
    EXPECT_EQ(cache.hits(), 0);
    EXPECT_GT(cache.misses(), 0);
  }
  {
    FileCache cache(dir);
    second = emit_json(run_suite("charts", p, {2, &cache, false}));
    EXPECT_GT(cache.hits(), 0);
    EXPECT_EQ(cache.misses(), 0);
  }
  EXPECT_EQ(first, second);
  EXPECT_EQ(first, emit_json(run_suite("charts", p, {})));
  std::filesystem::remove_all(dir);
}

TEST(Cache, FlagOverridesEnvironment) {
  ::setenv(kCacheEnvVar, "/tmp/from-env", 1);
  EXPECT_EQ(resolve_cache_dir(std::nullopt), std::filesystem::path("/tmp/from-env"));
  EXPECT_EQ(resolve_cache_dir(std::string("/tmp/from-flag")), std::filesystem::path("/tmp/from-flag"));
  ::unsetenv(kCacheEnvVar);
  EXPECT_FALSE(resolve_cache_dir(std::nullopt));
}

TEST(Cache, UncreatableDirectory) {
  auto file = scratch_dir("blocker");
  { std::ofstream(file) << "x"; }
  EXPECT_THROW(FileCache(file / "sub"), IoFailure);
  std::filesystem::remove(file);
}
