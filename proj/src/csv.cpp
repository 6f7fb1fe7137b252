#include "sepmetrics/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sepmetrics/errors.hpp"

namespace sepmetrics::io {
namespace {

std::string quote_if_needed(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvTable CsvTable::from_records(std::vector<CsvRecord> records) {
  CsvTable table;
  if (!records.empty()) {
    for (const auto& field : records.front()) table.columns.push_back(field.name);
  }
  table.rows = std::move(records);
  return table;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  // %.9g is locale-independent for the "C" locale the library assumes.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string format_cell(const CsvValue& value) {
  struct Visitor {
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return quote_if_needed(v); }
    std::string operator()(const std::optional<double>& v) const {
      return v ? format_real(*v) : std::string{};
    }
  };
  return std::visit(Visitor{}, value);
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += quote_if_needed(table.columns[c]);
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const CsvRecord& row = table.rows[r];
    if (row.size() != table.columns.size()) {
      throw InvalidArgumentError("csv row " + std::to_string(r) + " has " +
                                 std::to_string(row.size()) + " fields, expected " +
                                 std::to_string(table.columns.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].name != table.columns[c]) {
        throw InvalidArgumentError("csv row " + std::to_string(r) + " column '" + row[c].name +
                                   "' does not match header '" + table.columns[c] + "'");
      }
      if (c) out += ',';
      out += format_cell(row[c].value);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  os.flush();
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  write_text(format_csv(table), path);
}

}  // namespace sepmetrics::io
