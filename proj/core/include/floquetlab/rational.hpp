#pragma once

#include <gmpxx.h>

#include "floquetlab/error.hpp"

#include <concepts>
#include <string>
#include <string_view>
#include <vector>

namespace floquetlab {

/// Exact rational stand-in for a (possibly irrational) real number.
///
/// The value is kept in lowest terms with a positive denominator.
/// `source_depth` records how many continued-fraction terms produced it
/// (0 when the value was given exactly, e.g. parsed from "7/3").
class RationalApprox {
 public:
  RationalApprox() = default;
  RationalApprox(long numerator, unsigned long denominator = 1, int source_depth = 0);
  template <std::integral N, std::integral D = unsigned long>
  RationalApprox(N numerator, D denominator = 1)
      : RationalApprox(static_cast<long>(numerator), unsigned_denominator(denominator)) {}
  explicit RationalApprox(mpq_class value, int source_depth = 0);

  const mpq_class& value() const noexcept { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  int source_depth() const noexcept { return source_depth_; }

  bool is_zero() const { return sgn(value_) == 0; }

  /// Correctly rounded (to nearest, ties to even) double value.
  double to_double() const;

  /// Decimal rendering "p/q" in lowest terms.
  std::string to_string() const;

  friend bool operator==(const RationalApprox& a, const RationalApprox& b) {
    return a.value_ == b.value_;
  }

 private:
  static unsigned long unsigned_denominator(std::integral auto d) {
    if (d < 0) throw DomainError("negative denominator");
    return static_cast<unsigned long>(d);
  }

  mpq_class value_{0};
  int source_depth_ = 0;
};

/// num/den rounded to nearest double (ties to even). den must be nonzero.
double round_to_double(const mpz_class& num, const mpz_class& den);

/// Value of [a0; a1, a2, ...] as a rational, source_depth = quotients.size().
RationalApprox from_partial_quotients(const std::vector<mpz_class>& quotients);

/// Golden rotation number (sqrt(5) - 1) / 2 = [0; 1, 1, 1, ...] truncated.
RationalApprox golden_rotation(int terms = 200);

/// Golden ratio (1 + sqrt(5)) / 2 = [1; 1, 1, ...] truncated.
RationalApprox golden_ratio(int terms = 200);

/// sqrt(2) = [1; 2, 2, ...] truncated.
RationalApprox sqrt2(int terms = 200);

/// 1 / (2 pi) to roughly 100 significant digits.
const mpq_class& inverse_two_pi();

/// Parses a real given as a decimal ("0.618", "-1.5e-3"), a fraction ("p/q"),
/// or a named constant ("golden", "phi", "sqrt2").
/// Named constants are expanded to `named_terms` continued-fraction terms, or
/// further until the denominator has at least `min_bits` bits.
/// Throws DomainError when the text cannot be parsed.
RationalApprox parse_real(std::string_view text, int named_terms = 200, int min_bits = 0);

}  // namespace floquetlab
