#include "parse.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "floquetlab/error.hpp"
#include "floquetlab/experiments.hpp"
#include "floquetlab/number_theory.hpp"

namespace floquetlab::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::int64_t parse_count(std::string_view text) {
  const double v = parse_double(text);
  if (v != std::floor(v) || v < 1 || v > 9.0e15) {
    throw UsageError("expected a positive integer, got '" + std::string(text) + "'");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    throw UsageError("expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::int64_t> parse_n_grid(std::string_view text) {
  const auto range = split(text, ':');
  std::vector<std::int64_t> grid;
  if (range.size() == 3) {
    const auto first = parse_count(range[0]);
    const auto last = parse_count(range[1]);
    const auto count = parse_count(range[2]);
    if (last < first || count > 1000) throw UsageError("bad N range '" + std::string(text) + "'");
    grid = number_theory::geometric_grid(first, last, static_cast<int>(count));
  } else if (range.size() == 1) {
    for (const auto item : split(text, ',')) grid.push_back(parse_count(item));
  } else {
    throw UsageError("N grid must be 'first:last:count' or a comma list");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw UsageError("N grid must be strictly ascending");
  }
  return grid;
}

std::vector<double> parse_linear_grid(std::string_view text) {
  const auto range = split(text, ':');
  std::vector<double> grid;
  if (range.size() == 3) {
    const double lo = parse_double(range[0]);
    const double hi = parse_double(range[1]);
    const auto count = parse_count(range[2]);
    if (count > 1000) throw UsageError("grid too long");
    for (std::int64_t k = 0; k < count; ++k) {
      grid.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1));
    }
  } else if (range.size() == 1) {
    for (const auto item : split(text, ',')) grid.push_back(parse_double(item));
  } else {
    throw UsageError("grid must be 'lo:hi:count' or a comma list");
  }
  return grid;
}

double parse_angle(std::string_view text) {
  text = trim(text);
  const auto pos = text.find("pi");
  if (pos == std::string_view::npos) return parse_double(text);
  double factor = 1.0;
  const auto head = trim(text.substr(0, pos));
  if (head == "-") {
    factor = -1.0;
  } else if (!head.empty() && head != "+") {
    factor = parse_double(head.back() == '*' ? head.substr(0, head.size() - 1) : head);
  }
  auto tail = trim(text.substr(pos + 2));
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw UsageError("bad angle '" + std::string(text) + "'");
    divisor = parse_double(tail.substr(1));
    if (divisor == 0.0) throw UsageError("division by zero in '" + std::string(text) + "'");
  }
  return factor * std::numbers::pi / divisor;
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  for (const auto item : split(text, ',')) out.push_back(parse_angle(item));
  return out;
}

std::vector<double> parse_x_grid(std::string_view text) {
  text = trim(text);
  if (text == "default") return experiments::default_x_grid(5);
  if (text.starts_with("default:")) {
    const auto m = parse_count(text.substr(8));
    if (m > 10000) throw UsageError("x grid too long");
    return experiments::default_x_grid(static_cast<int>(m));
  }
  auto grid = parse_angle_list(text);
  for (const double x : grid) {
    if (!(x > 0.0 && x < 2.0 * std::numbers::pi)) {
      throw UsageError("x values must lie in (0, 2 pi)");
    }
  }
  return grid;
}

RationalApprox parse_beta(std::string_view text, int bits) {
  try {
    return parse_real(trim(text), 200, bits);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

std::vector<RationalApprox> parse_coeffs(std::string_view text, int bits) {
  std::vector<RationalApprox> out;
  for (const auto item : split(text, ',')) out.push_back(parse_beta(item, bits));
  return out;
}

}  // namespace floquetlab::cli
