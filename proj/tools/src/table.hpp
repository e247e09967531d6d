#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace wgscat::cli {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// CSV with a leading "# config" comment line, a header row and rows printed
// with 12 significant digits.
std::string to_csv(const Table& table, const nlohmann::json& config);
nlohmann::json to_json(const Table& table);

struct CommandResult {
  nlohmann::json report = nlohmann::json::object();
  Table table;
  std::vector<std::pair<std::string, Table>> dumps;  // named side tables
  std::vector<std::string> warnings;
  int exit_code = 0;
};

}  // namespace wgscat::cli
