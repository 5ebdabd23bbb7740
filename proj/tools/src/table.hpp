#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace floquetlab::cli {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Column {
  std::string name;
  std::string unit;  // empty for dimensionless or categorical columns
};

/// Column-typed table. The first row fixes the type of every column; later
/// rows must match it. An optional footer row is written last and is exempt
/// from the type check (used for fitted summaries).
class ResultTable {
 public:
  explicit ResultTable(std::vector<Column> columns);

  void add_row(std::vector<Cell> row);
  void set_footer(std::vector<Cell> row);

  const std::vector<Column>& columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<Cell>& row(std::size_t i) const { return rows_.at(i); }

  /// Comma separated, one record per LF-terminated line; a field is quoted
  /// RFC 4180 style when it contains a comma, quote, or line break.
  std::string to_csv() const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<Cell> footer_;
};

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

std::string format_cell(const Cell& cell);

std::string csv_field(std::string_view text);

}  // namespace floquetlab::cli
