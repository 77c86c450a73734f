#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

namespace modeguide {

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string to_csv() const;
  nlohmann::json to_json() const;
  static Table from_json(const nlohmann::json& j);
  bool operator==(const Table& o) const = default;
};

// 17 significant digits, '.' decimal
std::string format_double(double v);

struct RunRecord {
  std::string command;
  nlohmann::json config;      // every flag value after defaults and config file
  nlohmann::json provenance;  // truncation, tolerances, oracle settings, kernel backend
  nlohmann::json outputs;
  std::string timestamp;      // sidecar only; never part of primary outputs

  nlohmann::json to_json(bool with_timestamp) const;
  static RunRecord from_json(const nlohmann::json& j);
  bool operator==(const RunRecord& o) const;
};

std::uint64_t fnv1a(const std::string& s);
// cache key over command + config
std::string cache_key(const std::string& command, const nlohmann::json& config);

}  // namespace modeguide
