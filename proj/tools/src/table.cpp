#include "table.hpp"

#include <cmath>
#include <cstdio>

namespace wgscat::cli {

std::string to_csv(const Table& table, const nlohmann::json& config) {
  std::string out = "# config: " + config.dump() + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (std::isnan(row[i]))
        std::snprintf(buf, sizeof buf, "%snan", i ? "," : "");
      else
        std::snprintf(buf, sizeof buf, "%s%.12g", i ? "," : "", row[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : r) row.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
    rows.push_back(std::move(row));
  }
  return {{"columns", table.columns}, {"rows", rows}};
}

}  // namespace wgscat::cli
