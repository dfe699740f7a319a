#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pointint/core.hpp"

namespace pint {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::string name;  // file suffix; empty for the command's main table
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

struct Report {
  std::string command;
  std::string config_hash;
  nlohmann::ordered_json tolerances = nlohmann::ordered_json::object();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<Table> tables;
};

enum class ReportFormat { csv, json };

// Shortest round-trip decimal, '.' separator regardless of locale; nan and inf spelled out.
std::string format_number(double x);
std::string to_csv(const Table& t);
// {command, config_hash, tolerances, summary[, tables]}.
nlohmann::ordered_json to_json(const Report& r, bool with_tables);

// 64-bit FNV-1a of the canonical configuration dump, as 16 hex digits.
std::string config_hash(const Configuration& cfg);
std::string content_hash(const std::string& text);

// csv: <dir>/<command>.json summary plus <dir>/<command>[_<name>].csv per table.
// json: <dir>/<command>.json with the tables embedded. Returns the paths written.
std::vector<std::string> emit_report(const Report& r, ReportFormat format, const std::string& dir);

}  // namespace pint
