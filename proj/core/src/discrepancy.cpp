// Exact extreme discrepancy of finite point sets.
//
// Every double in [0,1) is a dyadic rational m * 2^-s. Scaling all points by a
// common 2^s turns the discrepancy into a ratio of integers, so the closed
// form and the brute-force oracle can both be evaluated without rounding and
// then converted to double once. That makes the two routes comparable with
// operator== rather than a tolerance.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "floquetlab/error.hpp"
#include "floquetlab/number_theory.hpp"

namespace floquetlab::number_theory {

namespace {

__extension__ typedef __int128 int128;
__extension__ typedef unsigned __int128 uint128;

struct Dyadic {
  std::uint64_t mantissa = 0;  // odd, or zero
  int scale = 0;               // value = mantissa * 2^-scale
};

Dyadic to_dyadic(double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("discrepancy points must lie in [0,1)");
  if (x == 0.0) return {};
  int exponent = 0;
  const double f = std::frexp(x, &exponent);  // x = f * 2^exponent, f in [0.5, 1)
  auto m = static_cast<std::uint64_t>(std::ldexp(f, 53));
  int scale = 53 - exponent;
  const int tz = std::countr_zero(m);
  m >>= tz;
  scale -= tz;
  return {m, scale};
}

mpz_class to_mpz(int128 v) {
  const bool negative = v < 0;
  const auto u = static_cast<uint128>(negative ? -v : v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class out = (hi << 64) + lo;
  return negative ? mpz_class(-out) : out;
}

mpz_class to_mpz(const mpz_class& v) { return v; }

template <class Int>
Int from_u64(std::uint64_t v) {
  if constexpr (std::is_same_v<Int, mpz_class>) {
    return mpz_class(static_cast<unsigned long>(v));
  } else {
    return static_cast<Int>(v);
  }
}

template <class Int>
Int shl(Int v, int bits) {
  if constexpr (std::is_same_v<Int, mpz_class>) {
    return v << static_cast<unsigned long>(bits);
  } else {
    return v << bits;
  }
}

template <class Int>
Int abs_value(const Int& v) {
  return v < 0 ? Int(-v) : v;
}

// Points scaled to integers X_i = x_i * 2^s with a shared s.
template <class Int>
std::vector<Int> scaled_points(const std::vector<Dyadic>& dyadic, int s) {
  std::vector<Int> out;
  out.reserve(dyadic.size());
  for (const auto& d : dyadic) {
    out.push_back(d.mantissa == 0 ? Int(0) : shl(from_u64<Int>(d.mantissa), s - d.scale));
  }
  return out;
}

int common_scale(const std::vector<Dyadic>& dyadic) {
  int s = 0;
  for (const auto& d : dyadic) s = std::max(s, d.scale);
  return s;
}

bool fits_int128(std::size_t n, int s) { return s <= 88 && n <= (std::size_t{1} << 32); }

// N * 2^s * D_N from sorted scaled points.
template <class Int>
Int closed_form_numerator(const std::vector<Int>& sorted, int s) {
  const Int n = from_u64<Int>(sorted.size());
  Int max_v = 0, min_v = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Int v = shl(from_u64<Int>(i + 1), s) - n * sorted[i];
    if (i == 0 || v > max_v) max_v = v;
    if (i == 0 || v < min_v) min_v = v;
  }
  return shl(Int(1), s) + max_v - min_v;
}

template <class Int>
Int oracle_numerator(const std::vector<Int>& sorted, int s) {
  const Int n = from_u64<Int>(sorted.size());
  // Candidate endpoints: 0, every distinct point, 1.
  std::vector<Int> ends;
  ends.reserve(sorted.size() + 2);
  ends.push_back(Int(0));
  for (const auto& x : sorted) {
    if (x != ends.back()) ends.push_back(x);
  }
  ends.push_back(shl(Int(1), s));
  // below[e] = #points < e, upto[e] = #points <= e.
  std::vector<std::int64_t> below(ends.size()), upto(ends.size());
  std::size_t cursor = 0;
  for (std::size_t e = 0; e < ends.size(); ++e) {
    while (cursor < sorted.size() && sorted[cursor] < ends[e]) ++cursor;
    below[e] = static_cast<std::int64_t>(cursor);
    std::size_t c = cursor;
    while (c < sorted.size() && sorted[c] == ends[e]) ++c;
    upto[e] = static_cast<std::int64_t>(c);
  }
  const Int unit = shl(Int(1), s);
  Int best = 0;
  const auto consider = [&](std::int64_t count, const Int& length) {
    const Int dev = abs_value(Int(from_u64<Int>(static_cast<std::uint64_t>(count)) * unit -
                                  n * length));
    if (dev > best) best = dev;
  };
  for (std::size_t a = 0; a < ends.size(); ++a) {
    for (std::size_t b = a; b < ends.size(); ++b) {
      const Int length = ends[b] - ends[a];
      consider(upto[b] - below[a], length);  // [a, b]
      consider(below[b] - below[a], length);  // [a, b)
      consider(upto[b] - upto[a], length);    // (a, b]
      if (b > a) consider(below[b] - upto[a], length);  // (a, b)
    }
  }
  return best;
}

double finish(const mpz_class& numerator, std::size_t n, int s) {
  const mpz_class denominator = mpz_class(static_cast<unsigned long>(n)) << static_cast<unsigned long>(s);
  return round_to_double(numerator, denominator);
}

template <class Int>
double closed_form(const std::vector<Dyadic>& dyadic, int s) {
  auto scaled = scaled_points<Int>(dyadic, s);
  std::sort(scaled.begin(), scaled.end());
  return finish(to_mpz(closed_form_numerator(scaled, s)), scaled.size(), s);
}

template <class Int>
double oracle(const std::vector<Dyadic>& dyadic, int s) {
  auto scaled = scaled_points<Int>(dyadic, s);
  std::sort(scaled.begin(), scaled.end());
  return finish(to_mpz(oracle_numerator(scaled, s)), scaled.size(), s);
}

std::vector<Dyadic> to_dyadic_all(std::span<const double> points) {
  if (points.empty()) throw SizeError("discrepancy of an empty point list");
  std::vector<Dyadic> out;
  out.reserve(points.size());
  for (const double x : points) out.push_back(to_dyadic(x));
  return out;
}

}  // namespace

double extreme_discrepancy(std::span<const double> points) {
  const auto dyadic = to_dyadic_all(points);
  const int s = common_scale(dyadic);
  return fits_int128(dyadic.size(), s) ? closed_form<int128>(dyadic, s)
                                       : closed_form<mpz_class>(dyadic, s);
}

DiscrepancyReport discrepancy_exact(std::span<const double> points) {
  DiscrepancyReport report;
  report.n_points = static_cast<std::int64_t>(points.size());
  report.d_n = extreme_discrepancy(points);
  return report;
}

double discrepancy_oracle(std::span<const double> points) {
  if (points.size() > kOracleMaxPoints) {
    throw SizeError("discrepancy oracle is quadratic; at most 2000 points");
  }
  const auto dyadic = to_dyadic_all(points);
  const int s = common_scale(dyadic);
  return fits_int128(dyadic.size(), s) ? oracle<int128>(dyadic, s) : oracle<mpz_class>(dyadic, s);
}

}  // namespace floquetlab::number_theory
