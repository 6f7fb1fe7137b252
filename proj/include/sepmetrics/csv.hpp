#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sepmetrics::io {

/// A CSV cell. Reals are printed with 9 significant digits; non-finite reals
/// become "inf", "-inf" or "nan"; an empty optional becomes an empty cell.
using CsvValue = std::variant<double, std::int64_t, std::string, std::optional<double>>;

struct CsvField {
  std::string name;
  CsvValue value;
};

using CsvRecord = std::vector<CsvField>;

/// Column set plus rows. Every row must carry exactly the table's columns, in
/// order; write_csv/format_csv reject anything else.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<CsvRecord> rows;

  /// Builds a table whose columns are taken from the first record.
  static CsvTable from_records(std::vector<CsvRecord> records);
};

[[nodiscard]] std::string format_real(double value);
[[nodiscard]] std::string format_cell(const CsvValue& value);
[[nodiscard]] std::string format_csv(const CsvTable& table);

/// Writes format_csv(table) to path; throws IoError on failure.
void write_csv(const CsvTable& table, const std::filesystem::path& path);

/// Writes raw text to a file, throwing IoError on failure.
void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace sepmetrics::io
