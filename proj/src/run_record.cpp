#include "modeguide/run_record.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace modeguide {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_cell(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<long>(c)) return std::to_string(std::get<long>(c));
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

nlohmann::json cell_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (!std::isfinite(v)) return format_double(v);
    return v;
  }
  if (std::holds_alternative<long>(c)) return std::get<long>(c);
  return std::get<std::string>(c);
}

Cell json_cell(const nlohmann::json& j) {
  if (j.is_number_integer()) return static_cast<long>(j.get<long long>());
  if (j.is_number()) return j.get<double>();
  return j.get<std::string>();
}

}  // namespace

std::string Table::to_csv() const {
  std::ostringstream os;
  for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
    os << "\n";
  }
  return os.str();
}

nlohmann::json Table::to_json() const {
  nlohmann::json j;
  j["columns"] = columns;
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : r) row.push_back(cell_json(c));
    rs.push_back(row);
  }
  j["rows"] = rs;
  return j;
}

Table Table::from_json(const nlohmann::json& j) {
  Table t;
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) row.push_back(json_cell(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

nlohmann::json RunRecord::to_json(bool with_timestamp) const {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config;
  j["provenance"] = provenance;
  j["outputs"] = outputs;
  if (with_timestamp) j["timestamp"] = timestamp;
  return j;
}

RunRecord RunRecord::from_json(const nlohmann::json& j) {
  RunRecord r;
  r.command = j.at("command").get<std::string>();
  r.config = j.at("config");
  r.provenance = j.value("provenance", nlohmann::json::object());
  r.outputs = j.at("outputs");
  r.timestamp = j.value("timestamp", std::string());
  return r;
}

bool RunRecord::operator==(const RunRecord& o) const {
  return command == o.command && config == o.config && provenance == o.provenance &&
         outputs == o.outputs && timestamp == o.timestamp;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string cache_key(const std::string& command, const nlohmann::json& config) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(command + "|" + config.dump())));
  return command + "-" + buf;
}

}  // namespace modeguide
