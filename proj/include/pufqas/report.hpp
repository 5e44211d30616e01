// report.hpp
// Tabular results with deterministic CSV and JSON serialization. Cells are
// integers, doubles, strings, or empty; doubles are printed with %.12g so a
// given table always serializes to the same bytes.

#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace pufqas {

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string cell_to_csv(const Cell& c) {
  switch (c.index()) {
    case 1: return std::to_string(std::get<std::int64_t>(c));
    case 2: return format_double(std::get<double>(c));
    case 3: return csv_escape(std::get<std::string>(c));
    default: return "";
  }
}

}  // namespace detail

inline void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out << ',';
    out << detail::csv_escape(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << detail::cell_to_csv(row[i]);
    }
    out << '\n';
  }
}

// Array of flat objects whose keys mirror the CSV header. Empty cells
// serialize as null.
inline void write_json(const Table& table, std::ostream& out) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      const Cell& c = row[i];
      switch (c.index()) {
        case 1: obj[table.columns[i]] = std::get<std::int64_t>(c); break;
        case 2: obj[table.columns[i]] = std::get<double>(c); break;
        case 3: obj[table.columns[i]] = std::get<std::string>(c); break;
        default: obj[table.columns[i]] = nullptr; break;
      }
    }
    rows.push_back(std::move(obj));
  }
  out << rows.dump(2) << '\n';
}

}  // namespace pufqas
