#pragma once

// Certificate document: JSON emission and parsing, and the text table.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>

#include <gmpxx.h>

#include "nodehilb/report.hpp"

namespace nodehilb {

struct Certificate {
  std::string version;
  std::string suite;
  Json params = Json::object();
  CheckReport checks;
  Json environment = Json::object();

  bool operator==(const Certificate& o) const { return to_json() == o.to_json(); }

  Json to_json() const {
    Json j;
    j["version"] = version;
    j["suite"] = suite;
    j["params"] = params;
    Json arr = Json::array();
    for (const auto& c : checks) {
      Json r;
      r["id"] = c.id;
      r["anchor"] = {{"location", c.anchor.location}, {"quote", c.anchor.quote}};
      r["status"] = to_string(c.status);
      r["detail"] = c.detail;
      r["millis"] = c.millis;
      arr.push_back(std::move(r));
    }
    j["checks"] = std::move(arr);
    j["environment"] = environment;
    return j;
  }
};

/// An integer as a JSON number when it fits in 64 bits, else as a decimal string.
inline Json json_integer(const mpz_class& v) {
  static_assert(sizeof(long) == sizeof(std::int64_t));
  if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
  return Json(v.get_str());
}

inline std::string emit_json(const Certificate& c) { return c.to_json().dump(2) + "\n"; }

inline Certificate parse_certificate(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("certificate is not valid JSON: ") + e.what());
  }
  try {
    Certificate c;
    c.version = j.at("version").get<std::string>();
    c.suite = j.at("suite").get<std::string>();
    c.params = j.at("params");
    for (const auto& r : j.at("checks")) {
      CheckRecord rec;
      rec.id = r.at("id").get<std::string>();
      rec.anchor.location = r.at("anchor").at("location").get<std::string>();
      rec.anchor.quote = r.at("anchor").at("quote").get<std::string>();
      rec.status = status_from_string(r.at("status").get<std::string>());
      rec.detail = r.at("detail");
      rec.millis = r.at("millis").get<long long>();
      c.checks.push_back(std::move(rec));
    }
    c.environment = j.at("environment");
    return c;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
}

inline const char* status_glyph(Status s) {
  switch (s) {
    case Status::verified: return "[ok]";
    case Status::corrected: return "[~~]";
    case Status::failed: return "[!!]";
    case Status::skipped: return "[--]";
  }
  return "[??]";
}

inline std::string emit_text(const Certificate& c) {
  std::ostringstream os;
  os << "suite " << c.suite << "  engine " << c.version << "  params " << c.params.dump() << "\n";
  std::size_t width = 0;
  for (const auto& r : c.checks) width = std::max(width, r.id.size());
  int counts[4] = {0, 0, 0, 0};
  for (const auto& r : c.checks) {
    ++counts[static_cast<int>(r.status)];
    os << status_glyph(r.status) << " " << r.id << std::string(width - r.id.size() + 2, ' ')
       << to_string(r.status) << "  " << r.anchor.location << "\n";
  }
  os << counts[0] << " verified, " << counts[1] << " corrected, " << counts[2] << " failed, " << counts[3]
     << " skipped\n";
  return os.str();
}

/// 0 all verified, 1 some corrected or skipped and none failed, 2 any failed.
inline int exit_code(const CheckReport& checks) {
  bool corrected = false;
  for (const auto& c : checks) {
    if (c.status == Status::failed) return 2;
    if (c.status != Status::verified) corrected = true;
  }
  return corrected ? 1 : 0;
}

}  // namespace nodehilb
