#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace report {

inline constexpr int kSchemaVersion = 1;

// one checked item; rationals are kept as strings ("3/2")
struct Entry {
  std::vector<std::string> triple;
  std::optional<std::string> cup_coeff, bk_coeff, p_ratio;
  std::string status;
  bool operator==(const Entry& o) const = default;
};

struct Report {
  int schema_version = kSchemaVersion;
  std::string command;
  std::string type;
  std::vector<int> levi;  // 1-based
  std::map<std::string, std::string> summary;
  std::string coverage;
  std::vector<Entry> entries;
  bool operator==(const Report& o) const = default;
};

nlohmann::ordered_json to_json(const Report& r);
Report from_json(const nlohmann::json& j);

std::string to_csv(const Report& r);
std::string to_text(const Report& r);

}  // namespace report
