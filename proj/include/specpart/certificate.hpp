#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace specpart {

inline constexpr double kCertTol = 1e-9;

/// FNV-1a over the raw bytes of a double array; used for witness digests.
inline std::string digest(const std::vector<double>& values) {
  std::uint64_t h = 1469598103934665603ull;
  for (double d : values) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Machine-checkable record of one inequality instance.
/// holds <=> lhs <= rhs + 1e-9.
struct Certificate {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::map<std::string, double> constants;
  std::map<std::string, std::string> witnesses;
  bool holds = false;
  bool degenerate = false;
  bool applicable = true;

  static Certificate make(std::string name, double lhs, double rhs) {
    Certificate c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.holds = lhs <= rhs + kCertTol;
    return c;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["lhs"] = std::isfinite(lhs) ? nlohmann::json(lhs) : nlohmann::json();
    j["rhs"] = std::isfinite(rhs) ? nlohmann::json(rhs) : nlohmann::json();
    j["holds"] = holds;
    if (degenerate) j["degenerate"] = true;
    if (!applicable) j["applicable"] = false;
    nlohmann::json jc = nlohmann::json::object();
    for (const auto& [k, v] : constants) jc[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
    j["constants"] = jc;
    nlohmann::json jw = nlohmann::json::object();
    for (const auto& [k, v] : witnesses) jw[k] = v;
    j["witnesses"] = jw;
    return j;
  }
};

}  // namespace specpart
