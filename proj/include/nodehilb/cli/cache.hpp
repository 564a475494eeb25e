#pragma once

// On-disk store of Groebner bases keyed by engine version, ring, order and
// generators.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nodehilb/ideal/groebner.hpp"
#include "nodehilb/report.hpp"

namespace nodehilb {

inline constexpr const char* kCacheEnvVar = "NODEHILB_CACHE_DIR";

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Flag value if given, else the environment variable, else no cache.
inline std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return std::filesystem::path(*flag);
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

class FileCache : public BasisCache {
 public:
  explicit FileCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoFailure("cannot create cache directory " + dir_.string() + ": " + ec.message());
  }

  std::optional<std::vector<std::string>> load(const std::string& key) override {
    std::lock_guard lock(key_mutex(key));
    std::ifstream in(path_for(key));
    if (!in) {
      ++misses_;
      return std::nullopt;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      Json j = Json::parse(ss.str());
      if (j.at("key").get<std::string>() != key) {
        ++misses_;
        return std::nullopt;
      }
      ++hits_;
      return j.at("basis").get<std::vector<std::string>>();
    } catch (const Json::exception&) {
      ++misses_;
      return std::nullopt;
    }
  }

  void store(const std::string& key, const std::vector<std::string>& basis) override {
    std::lock_guard lock(key_mutex(key));
    Json j;
    j["key"] = key;
    j["basis"] = basis;
    auto target = path_for(key);
    std::ostringstream tmpname;
    tmpname << target.filename().string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id())
            << "." << counter_++;
    auto tmp = dir_ / tmpname.str();
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw IoFailure("cannot write cache file " + tmp.string());
      out << j.dump();
      if (!out) throw IoFailure("short write to cache file " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      throw IoFailure("cannot publish cache file " + target.string());
    }
  }

  long long hits() const { return hits_; }
  long long misses() const { return misses_; }

 private:
  std::filesystem::path path_for(const std::string& key) const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
    return dir_ / (std::string(buf) + ".json");
  }

  std::mutex& key_mutex(const std::string& key) {
    std::lock_guard lock(table_mutex_);
    auto& slot = locks_[fnv1a(key)];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
  }

  std::filesystem::path dir_;
  std::mutex table_mutex_;
  std::map<std::uint64_t, std::unique_ptr<std::mutex>> locks_;
  std::atomic<long long> hits_{0}, misses_{0}, counter_{0};
};

}  // namespace nodehilb
