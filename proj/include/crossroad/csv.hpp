#pragma once

// Minimal CSV writer/reader for result tables: header row, 12 significant
// digits, LF line endings. Text cells are quoted only when they contain a
// comma, a quote or a line break.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "crossroad/errors.hpp"
#include "crossroad/experiments.hpp"

namespace crossroad {

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string format_cell(const Cell& c) {
  if (const double* v = std::get_if<double>(&c)) return format_number(*v);
  return csv_escape(std::get<std::string>(c));
}

inline void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << csv_escape(table.columns[i]);
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

inline void emit_csv(const Table& table, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_csv(os, table);
  os.flush();
  if (!os) throw IoError("write to '" + path + "' failed");
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

inline Cell parse_cell(const std::string& s) {
  if (s.empty()) return s;
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  return s;
}

}  // namespace detail

// Inverse of write_csv for tables without embedded line breaks. Fields that
// parse completely as numbers come back as doubles.
inline Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) return t;
  t.columns = detail::split_csv_line(line);
  while (std::getline(is, line)) {
    std::vector<Cell> row;
    for (auto& f : detail::split_csv_line(line)) row.push_back(detail::parse_cell(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace crossroad
