#include "table.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace floquetlab::cli {

ResultTable::ResultTable(std::vector<Column> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("table needs at least one column");
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::invalid_argument("row arity does not match columns");
  if (!rows_.empty()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].index() != rows_.front()[c].index()) {
        throw std::invalid_argument("cell type differs from column type in " + columns_[c].name);
      }
    }
  }
  rows_.push_back(std::move(row));
}

void ResultTable::set_footer(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::invalid_argument("footer arity does not match columns");
  footer_ = std::move(row);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (const char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string ResultTable::to_csv() const {
  std::string out;
  const auto line = [&](auto&& field_of, std::size_t n) {
    for (std::size_t c = 0; c < n; ++c) {
      if (c) out += ',';
      out += csv_field(field_of(c));
    }
    out += '\n';
  };
  line([&](std::size_t c) { return columns_[c].name; }, columns_.size());
  for (const auto& row : rows_) line([&](std::size_t c) { return format_cell(row[c]); }, row.size());
  if (!footer_.empty()) line([&](std::size_t c) { return format_cell(footer_[c]); }, footer_.size());
  return out;
}

}  // namespace floquetlab::cli
