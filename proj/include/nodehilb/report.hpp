#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nodehilb/errors.hpp"

namespace nodehilb {

using Json = nlohmann::ordered_json;

enum class Status { verified, corrected, failed, skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::verified: return "verified";
    case Status::corrected: return "corrected";
    case Status::failed: return "failed";
    case Status::skipped: return "skipped";
  }
  return "failed";
}

inline Status status_from_string(const std::string& s) {
  if (s == "verified") return Status::verified;
  if (s == "corrected") return Status::corrected;
  if (s == "failed") return Status::failed;
  if (s == "skipped") return Status::skipped;
  throw ParseError("unknown status: " + s);
}

/// Larger is worse; skipped ranks between corrected and failed only for
/// ordering purposes, exit codes treat it separately.
inline int severity(Status s) {
  switch (s) {
    case Status::verified: return 0;
    case Status::corrected: return 1;
    case Status::skipped: return 1;
    case Status::failed: return 2;
  }
  return 2;
}

struct Anchor {
  std::string location;
  std::string quote;
};

struct CheckRecord {
  std::string id;
  Anchor anchor;
  Status status = Status::verified;
  Json detail = Json::object();
  long long millis = 0;
};

using CheckReport = std::vector<CheckRecord>;

inline CheckRecord make_check(std::string id, Anchor anchor, bool ok, Json detail = Json::object()) {
  return {std::move(id), std::move(anchor), ok ? Status::verified : Status::failed, std::move(detail), 0};
}

inline void append(CheckReport& into, CheckReport more) {
  for (auto& r : more) into.push_back(std::move(r));
}

inline bool all_verified(const CheckReport& r) {
  for (const auto& c : r)
    if (c.status != Status::verified) return false;
  return true;
}

inline bool none_failed(const CheckReport& r) {
  for (const auto& c : r)
    if (c.status == Status::failed) return false;
  return true;
}

}  // namespace nodehilb
