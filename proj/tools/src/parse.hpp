#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "floquetlab/rational.hpp"

namespace floquetlab::cli {

/// Malformed flag value; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_double(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);

/// "first:last:count" (geometric, integers) or "n1,n2,...". Accepts 1e3 forms.
std::vector<std::int64_t> parse_n_grid(std::string_view text);

/// "lo:hi:count" (linear) or "g1,g2,...".
std::vector<double> parse_linear_grid(std::string_view text);

/// A real number or a multiple of pi: "1.5", "pi", "-pi/2", "3pi/2", "0.25pi".
double parse_angle(std::string_view text);

std::vector<double> parse_angle_list(std::string_view text);

/// "default", "default:M", or a list of angles.
std::vector<double> parse_x_grid(std::string_view text);

/// parse_real with usage errors; named constants get at least `bits` bits.
RationalApprox parse_beta(std::string_view text, int bits);

std::vector<RationalApprox> parse_coeffs(std::string_view text, int bits);

}  // namespace floquetlab::cli
