#include "floquetlab/phase_walk.hpp"

#include <cmath>
#include <numbers>

#include "floquetlab/error.hpp"

namespace floquetlab {

namespace {

mpz_class mod_positive(const mpz_class& value, const mpz_class& modulus) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

}  // namespace

PhaseWalker::PhaseWalker(const std::vector<mpq_class>& coefficients, std::int64_t start)
    : modulus_(1), n_(start) {
  if (coefficients.empty()) throw DomainError("polynomial needs at least one coefficient");
  for (const auto& c : coefficients) {
    mpz_lcm(modulus_.get_mpz_t(), modulus_.get_mpz_t(), c.get_den_mpz_t());
  }
  std::vector<mpz_class> integer_coeffs;
  integer_coeffs.reserve(coefficients.size());
  for (const auto& c : coefficients) {
    mpz_class scaled = c.get_num() * (modulus_ / c.get_den());
    integer_coeffs.push_back(mod_positive(scaled, modulus_));
  }
  std::size_t degree = integer_coeffs.size() - 1;
  while (degree > 0 && sgn(integer_coeffs[degree]) == 0) --degree;

  // Values at start .. start + degree, then difference them in place.
  table_.resize(degree + 1);
  for (std::size_t k = 0; k <= degree; ++k) {
    const mpz_class x(static_cast<long>(start + static_cast<std::int64_t>(k)));
    mpz_class value = 0;
    for (std::size_t j = degree + 1; j-- > 0;) value = value * x + integer_coeffs[j];
    table_[k] = mod_positive(value, modulus_);
  }
  for (std::size_t level = 1; level <= degree; ++level) {
    for (std::size_t k = degree; k >= level; --k) {
      table_[k] = mod_positive(table_[k] - table_[k - 1], modulus_);
    }
  }
}

void PhaseWalker::advance() {
  for (std::size_t k = 0; k + 1 < table_.size(); ++k) {
    table_[k] += table_[k + 1];
    if (table_[k] >= modulus_) table_[k] -= modulus_;
  }
  ++n_;
}

double PhaseWalker::current() const {
  const double value = round_to_double(table_.front(), modulus_);
  // Rounding can reach 1.0 when the residue is within half an ulp of Q.
  return value < 1.0 ? value : std::nextafter(1.0, 0.0);
}

std::vector<double> polynomial_fractional_parts(const std::vector<mpq_class>& coefficients,
                                                std::int64_t start, std::int64_t count) {
  if (count < 0) throw SizeError("negative point count");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  PhaseWalker walker(coefficients, start);
  for (std::int64_t i = 0; i < count; ++i) {
    out.push_back(walker.current());
    walker.advance();
  }
  return out;
}

std::complex<double> cis_turns(double t) {
  const double quarter = std::nearbyint(4.0 * t);
  const double r = t - 0.25 * quarter;  // |r| <= 1/8, exact for |t| < 2^50
  const double angle = 2.0 * std::numbers::pi * r;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const long q = static_cast<long>(std::fmod(quarter, 4.0));
  switch ((q % 4 + 4) % 4) {
    case 0:
      return {c, s};
    case 1:
      return {-s, c};
    case 2:
      return {-c, -s};
    default:
      return {s, -c};
  }
}

}  // namespace floquetlab
