#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "floquetlab/rational.hpp"

namespace floquetlab::number_theory {

/// The sequence (n^j beta) mod 1, n = 1, 2, ...
struct SequenceSpec {
  int j = 1;
  RationalApprox beta;
  std::string label;

  void validate() const;
};

/// {x} = x - floor(x), in [0, 1).
double fractional_part(double x);
RationalApprox fractional_part(const RationalApprox& x);

/// <x> = min({x}, 1 - {x}), the distance to the nearest integer.
double nearest_integer_distance(double x);
RationalApprox nearest_integer_distance(const RationalApprox& x);

struct ContinuedFraction {
  std::vector<mpz_class> quotients;
  std::vector<RationalApprox> convergents;  // p_k / q_k, one per quotient
  bool terminated = false;                   // exact expansion ended before depth
};

/// First `depth` partial quotients of x and their convergents.
/// A double is expanded as the exact binary rational it represents.
ContinuedFraction continued_fraction(const RationalApprox& x, int depth);
ContinuedFraction continued_fraction(double x, int depth);

struct TypeEstimate {
  double eta_hat = 1.0;
  mpz_class witness_q = 1;
  std::int64_t q_max = 0;
};

/// Finite-data estimate of the irrationality type eta of x, from the
/// best-approximation errors <q_k x> at convergent denominators q_k <= q_max.
///
/// The estimate is the largest local scaling exponent
///   [log(1/<q_k x>) - log(1/<q_{k-1} x>)] / [log q_k - log q_{k-1}]
/// over consecutive convergents in the upper range q_max^{1/4} <= q_k <= q_max
/// (at least two convergents are always used), clamped to >= 1. For numbers
/// with bounded partial quotients the local exponent settles at 1 after a few
/// convergents, while sudden deep approximations show up as large slopes.
///
/// Throws PrecisionError unless x's denominator exceeds q_max^2, and
/// DomainError when q_max < 2.
TypeEstimate irrational_type_estimate(const RationalApprox& x, std::int64_t q_max);

struct WeylSum {
  std::complex<double> value;
  double modulus = 0.0;
};

/// S = sum_{n=1}^{N} exp(2 pi i h n^j beta), with h n^j beta reduced mod 1
/// exactly before any trigonometric evaluation.
WeylSum weyl_sum(const SequenceSpec& spec, std::int64_t h, std::int64_t n_terms);

/// rho' = 1 / (3 (j-1)^2 ln(12 j (j-1))), j >= 2.
double classical_exponent(int j);

/// 1 - 1/j + epsilon.
double conjectured_exponent(int j, double epsilon);

/// {n^j beta} for n = 1 .. n_terms, exact residues rounded once.
std::vector<double> sequence_points(const SequenceSpec& spec, std::int64_t n_terms);

struct DiscrepancyReport {
  std::int64_t n_points = 0;
  double d_n = 0.0;
  std::optional<double> et_bound;
  int m_used = 0;
};

/// Extreme discrepancy of a point set in [0,1), computed exactly from the
/// order statistics: D_N = 1/N + max_i (i/N - x_(i)) - min_i (i/N - x_(i)).
/// The result is the correctly rounded value of the exact rational D_N.
DiscrepancyReport discrepancy_exact(std::span<const double> points);

/// D_N alone, for callers that do not need the report.
double extreme_discrepancy(std::span<const double> points);

/// Quadratic-time verifier: supremum over intervals with endpoints in the
/// point set and {0, 1}, with all four open/closed endpoint combinations.
/// Throws SizeError above kOracleMaxPoints.
inline constexpr std::size_t kOracleMaxPoints = 2000;
double discrepancy_oracle(std::span<const double> points);

/// 6/(m+1) + (4/pi) sum_{h=1}^{m} (1/h) |(1/N) sum_n exp(2 pi i h x_n)|.
double erdos_turan_bound(std::span<const double> points, int m);

struct ScalingPoint {
  std::int64_t n = 0;
  double d_n = 0.0;
};

struct ScalingFit {
  std::vector<ScalingPoint> table;
  double slope = 0.0;              // least squares of log D_N against log N
  double predicted_exponent = 0.0;  // -1 / (eta j)
};

/// Discrepancy of the first N points of (n^j beta) for every N in `n_grid`
/// and the fitted power law. The grid needs at least four sizes spanning at
/// least two decades.
ScalingFit discrepancy_scaling_fit(const SequenceSpec& spec, std::span<const std::int64_t> n_grid,
                                   double eta = 1.0);

/// Geometric grid of `count` integers from `first` to `last` inclusive.
std::vector<std::int64_t> geometric_grid(std::int64_t first, std::int64_t last, int count);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace floquetlab::number_theory
