#include "pointint/report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pint {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw ValidationError("Table::add: row width does not match the columns");
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return format_number(*d);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + p.string());
  f << text;
  if (!f) throw ValidationError("write failed for " + p.string());
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + cell_text(t.columns[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const Report& r, bool with_tables) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["config_hash"] = r.config_hash;
  j["tolerances"] = r.tolerances;
  j["summary"] = r.summary;
  if (with_tables) {
    auto& tabs = j["tables"] = nlohmann::ordered_json::object();
    for (const auto& t : r.tables) {
      auto& jt = tabs[t.name.empty() ? std::string("main") : t.name];
      jt["columns"] = t.columns;
      jt["rows"] = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) {
        auto jr = nlohmann::ordered_json::array();
        for (const auto& c : row) jr.push_back(cell_json(c));
        jt["rows"].push_back(std::move(jr));
      }
    }
  }
  return j;
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::string config_hash(const Configuration& cfg) { return content_hash(dump_config(cfg)); }

std::vector<std::string> emit_report(const Report& r, ReportFormat format, const std::string& dir) {
  if (r.command.empty()) throw ValidationError("emit_report: empty command name");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir + ": " + ec.message());
  std::vector<std::string> written;
  const fs::path base(dir);
  const auto summary = base / (r.command + ".json");
  write_file(summary, to_json(r, format == ReportFormat::json).dump(2) + "\n");
  written.push_back(summary.string());
  if (format == ReportFormat::csv) {
    for (const auto& t : r.tables) {
      const auto p = base / (r.command + (t.name.empty() ? "" : "_" + t.name) + ".csv");
      write_file(p, to_csv(t));
      written.push_back(p.string());
    }
  }
  return written;
}

}  // namespace pint
