#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "whittemore/error.hpp"
#include "whittemore/value.hpp"

namespace whittemore {

namespace detail {

// RFC 4180 records: quoted fields may hold commas, newlines and "" escapes.
// Returns each record with the line it started on.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> csv_records(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
  std::vector<std::string> record;
  std::string field;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool quoted = false;
  bool field_started = false;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    // A blank line is not a record.
    if (!(record.size() == 1 && record.front().empty() && !field_started)) out.emplace_back(record_line, std::move(record));
    record.clear();
    field_started = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) throw CsvError("quote inside an unquoted field", line);
        quoted = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) throw CsvError("unterminated quoted field", record_line);
  if (field_started || !field.empty() || !record.empty()) end_record();
  return out;
}

inline bool needs_quotes(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos || (!s.empty() && (s.front() == ' ' || s.back() == ' '));
}

inline std::string csv_field(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Parses CSV text: a header row of variable names, then one event per row
/// with every cell kept as a string.
inline Dataset parse_csv(std::string_view text) {
  auto records = detail::csv_records(text);
  if (records.empty()) throw CsvError("missing header row", 1);
  Dataset out;
  const auto& [header_line, header] = records.front();
  for (const auto& name : header) {
    if (name.empty()) throw CsvError("empty column name in header", header_line);
    if (!Variable::valid_name(name)) throw CsvError("column name '" + name + "' is not a valid variable name", header_line);
    Variable v(name);
    if (std::find(out.columns.begin(), out.columns.end(), v) != out.columns.end()) {
      throw CsvError("duplicate column '" + name + "'", header_line);
    }
    out.columns.push_back(v);
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& [line, fields] = records[r];
    if (fields.size() != out.columns.size()) {
      throw CsvError("row has " + std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(out.columns.size()),
                     line);
    }
    Event e;
    for (std::size_t i = 0; i < fields.size(); ++i) e.emplace(out.columns[i], fields[i]);
    out.rows.push_back(std::move(e));
  }
  return out;
}

inline Dataset read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open CSV file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_csv(buf.str());
  } catch (const CsvError& e) {
    throw CsvError(path + ":" + std::to_string(e.line()) + ": " + e.what(), e.line());
  }
}

/// CSV text for a dataset; values are written as their unquoted text.
inline std::string write_csv(const Dataset& d) {
  std::string out;
  for (std::size_t i = 0; i < d.columns.size(); ++i) {
    if (i) out += ',';
    out += detail::csv_field(d.columns[i].name());
  }
  out += "\r\n";
  for (const auto& row : d.rows) {
    for (std::size_t i = 0; i < d.columns.size(); ++i) {
      if (i) out += ',';
      out += detail::csv_field(category_text(row.at(d.columns[i])));
    }
    out += "\r\n";
  }
  return out;
}

}  // namespace whittemore
