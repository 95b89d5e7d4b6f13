#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "nbe/config.hpp"

namespace nbe {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Exit codes: 0 success, 1 error, 2 a verified mathematical inequality failed.
struct RunOutcome {
  std::vector<nlohmann::ordered_json> records;
  std::vector<std::string> csv_lines;  // optional value-table dump
  int exit_code = 0;
  std::string error;  // set when exit_code == 1
};

RunOutcome run(const RunConfig& cfg);

// Deterministic serialization: one compact JSON object per line.
std::string to_jsonl(const std::vector<nlohmann::ordered_json>& records);

// Doubles that may carry the infinite marker.
nlohmann::ordered_json json_value(double v);

}  // namespace nbe
