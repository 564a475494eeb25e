#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include "nodehilb/cli/cache.hpp"
#include "nodehilb/cli/certificate.hpp"
#include "nodehilb/cli/suites.hpp"

using namespace nodehilb;

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of the local model of the relative Hilbert scheme of a nodal curve"};
  std::string suite;
  SuiteParams params;
  int m = 0, n = 0, j = 0, k = -1, jobs = 1;
  std::string format = "json", out_path, cache_dir;
  bool measure = false;

  app.add_option("suite", suite, "Suite to run")->required()->check(CLI::IsMember(suite_names()));
  auto* m_opt = app.add_option("--m", m, "Number of points");
  auto* n_opt = app.add_option("--n", n, "Node multiplicity");
  auto* j_opt = app.add_option("--j", j, "Generator or scroll index");
  auto* k_opt = app.add_option("--k", k, "Residual length");
  app.add_flag("--slow", params.slow, "Run slow-gated checks");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 256));
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", out_path, "Write the certificate to this file");
  app.add_option("--cache", cache_dir, std::string("Basis cache directory (overrides ") + kCacheEnvVar + ")");
  app.add_option("--timeout", params.timeout_seconds, "Per-check time budget in seconds (0: none)");
  app.add_flag("--measure", measure, "Record timings and thread count in the certificate");
  app.add_flag("--allow-large", params.allow_large, "Permit parameters above 8");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  if (m_opt->count()) params.m = m;
  if (n_opt->count()) params.n = n;
  if (j_opt->count()) params.j = j;
  if (k_opt->count()) params.k = k;

  try {
    std::unique_ptr<FileCache> cache;
    if (auto dir = resolve_cache_dir(cache_dir.empty() ? std::nullopt : std::optional<std::string>(cache_dir)))
      cache = std::make_unique<FileCache>(*dir);
    RunConfig cfg{jobs, cache.get(), measure};
    Certificate cert = run_suite(suite, params, cfg);
    if (measure && cache) {
      cert.environment["cache_hits"] = cache->hits();
      cert.environment["cache_misses"] = cache->misses();
    }
    std::string body = format == "json" ? emit_json(cert) : emit_text(cert);
    if (out_path.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(out_path, std::ios::trunc);
      if (!(out << body)) throw IoFailure("cannot write " + out_path);
    }
    return exit_code(cert.checks);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
