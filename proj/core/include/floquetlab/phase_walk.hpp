#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <vector>

#include "floquetlab/rational.hpp"

namespace floquetlab {

/// Walks the fractional parts {f(n)} of a polynomial with rational
/// coefficients, f(n) = sum_j c_j n^j, for n = start, start + 1, ...
///
/// Coefficients are brought to a common denominator Q and the integer
/// residues f(n) * Q mod Q are advanced with a forward-difference table, so
/// every step costs `degree` big-integer additions and no precision is ever
/// lost. The double returned by `current()` is rounded once from the exact
/// residue.
class PhaseWalker {
 public:
  PhaseWalker(const std::vector<mpq_class>& coefficients, std::int64_t start);

  /// Exact fractional part {f(n)} at the current n, rounded to nearest double
  /// and clamped below 1.
  double current() const;

  const mpz_class& residue() const noexcept { return table_.front(); }
  const mpz_class& modulus() const noexcept { return modulus_; }
  std::int64_t n() const noexcept { return n_; }

  void advance();

 private:
  mpz_class modulus_;
  std::vector<mpz_class> table_;  // forward differences, reduced mod Q
  std::int64_t n_;
};

/// Fractional parts {f(n)} for n = start .. start + count - 1.
std::vector<double> polynomial_fractional_parts(const std::vector<mpq_class>& coefficients,
                                                std::int64_t start, std::int64_t count);

/// exp(2 pi i t) with exact results at multiples of a quarter turn.
std::complex<double> cis_turns(double t);

}  // namespace floquetlab
