#include "floquetlab/number_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "floquetlab/error.hpp"
#include "floquetlab/phase_walk.hpp"

namespace floquetlab::number_theory {

namespace {

mpq_class exact_value(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite input");
  mpq_class q(x);  // exact: every finite double is a dyadic rational
  q.canonicalize();
  return q;
}

mpq_class frac_exact(const mpq_class& x) {
  mpz_class floor_part;
  mpz_fdiv_q(floor_part.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  mpq_class f = x - mpq_class(floor_part);
  f.canonicalize();
  return f;
}

mpq_class distance_exact(const mpq_class& x) {
  const mpq_class f = frac_exact(x);
  const mpq_class g = 1 - f;
  return f < g ? f : g;
}

// Natural log of a positive rational without going through a double that
// might underflow.
double log_positive(const mpq_class& x) {
  long num_exp = 0;
  long den_exp = 0;
  const double num_mant = mpz_get_d_2exp(&num_exp, x.get_num_mpz_t());
  const double den_mant = mpz_get_d_2exp(&den_exp, x.get_den_mpz_t());
  return std::log(num_mant) - std::log(den_mant) +
         static_cast<double>(num_exp - den_exp) * std::numbers::ln2;
}

std::vector<mpq_class> monomial(int j, const mpq_class& coefficient) {
  std::vector<mpq_class> coeffs(static_cast<std::size_t>(j) + 1, mpq_class(0));
  coeffs[static_cast<std::size_t>(j)] = coefficient;
  return coeffs;
}

}  // namespace

void SequenceSpec::validate() const {
  if (j < 1) throw DomainError("sequence power j must be >= 1");
  if (sgn(beta.value().get_den()) <= 0) throw DomainError("beta denominator must be positive");
}

double fractional_part(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite input");
  const double f = x - std::floor(x);
  // x slightly below an integer: x - floor(x) may round up to 1.
  return f < 1.0 ? f : 0.0;
}

RationalApprox fractional_part(const RationalApprox& x) {
  return RationalApprox(frac_exact(x.value()), x.source_depth());
}

double nearest_integer_distance(double x) {
  const double f = fractional_part(x);
  return std::min(f, 1.0 - f);
}

RationalApprox nearest_integer_distance(const RationalApprox& x) {
  return RationalApprox(distance_exact(x.value()), x.source_depth());
}

ContinuedFraction continued_fraction(const RationalApprox& x, int depth) {
  if (depth < 1) throw DomainError("continued fraction depth must be >= 1");
  ContinuedFraction cf;
  mpz_class num = x.value().get_num();
  mpz_class den = x.value().get_den();
  mpz_class p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
  for (int k = 0; k < depth; ++k) {
    mpz_class a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const mpz_class p = a * p_prev + p_prev2;
    const mpz_class q = a * q_prev + q_prev2;
    cf.quotients.push_back(a);
    cf.convergents.emplace_back(mpq_class(p, q), k + 1);
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
    if (sgn(r) == 0) {
      cf.terminated = k + 1 < depth;
      break;
    }
    num = den;
    den = r;
  }
  return cf;
}

ContinuedFraction continued_fraction(double x, int depth) {
  return continued_fraction(RationalApprox(exact_value(x)), depth);
}

TypeEstimate irrational_type_estimate(const RationalApprox& x, std::int64_t q_max) {
  if (q_max < 2) throw DomainError("q_max must be >= 2");
  const mpz_class q_limit(static_cast<long>(q_max));
  if (x.value().get_den() <= q_limit * q_limit) {
    throw PrecisionError("rational stand-in has denominator " + x.denominator().get_str() +
                         ", need more than q_max^2 = " + mpz_class(q_limit * q_limit).get_str());
  }

  struct Sample {
    mpz_class q;
    double log_q;
    double log_inv_dist;
  };
  std::vector<Sample> samples;
  {
    mpz_class num = x.value().get_num();
    mpz_class den = x.value().get_den();
    mpz_class q_prev = 0, q_prev2 = 1;
    while (true) {
      mpz_class a, r;
      mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      const mpz_class q = a * q_prev + q_prev2;
      if (q > q_limit) break;
      if (q >= 2 && (samples.empty() || samples.back().q != q)) {
        const mpq_class dist = distance_exact(mpq_class(q) * x.value());
        samples.push_back({q, std::log(q.get_d()), -log_positive(dist)});
      }
      if (sgn(r) == 0) break;
      q_prev2 = q_prev;
      q_prev = q;
      num = den;
      den = r;
    }
  }

  TypeEstimate estimate;
  estimate.q_max = q_max;
  if (samples.empty()) return estimate;
  if (samples.size() == 1) {
    estimate.eta_hat = std::max(1.0, samples[0].log_inv_dist / samples[0].log_q);
    estimate.witness_q = samples[0].q;
    return estimate;
  }

  const double lower = std::pow(static_cast<double>(q_max), 0.25);
  std::size_t first = samples.size() - 1;
  while (first > 0 && samples[first - 1].q.get_d() >= lower) --first;
  first = std::min(first, samples.size() - 2);

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = first + 1; k < samples.size(); ++k) {
    const double slope = (samples[k].log_inv_dist - samples[k - 1].log_inv_dist) /
                         (samples[k].log_q - samples[k - 1].log_q);
    if (slope > best) {
      best = slope;
      estimate.witness_q = samples[k].q;
    }
  }
  estimate.eta_hat = std::max(1.0, best);
  return estimate;
}

WeylSum weyl_sum(const SequenceSpec& spec, std::int64_t h, std::int64_t n_terms) {
  spec.validate();
  if (n_terms < 1) throw DomainError("weyl_sum needs n_terms >= 1");
  if (h < 1) throw DomainError("weyl_sum needs h >= 1");
  const mpq_class coefficient = mpq_class(mpz_class(static_cast<long>(h))) * spec.beta.value();
  PhaseWalker walker(monomial(spec.j, coefficient), 1);
  long double re = 0.0L;
  long double im = 0.0L;
  for (std::int64_t n = 0; n < n_terms; ++n) {
    const auto z = cis_turns(walker.current());
    re += z.real();
    im += z.imag();
    walker.advance();
  }
  WeylSum out;
  out.value = {static_cast<double>(re), static_cast<double>(im)};
  out.modulus = std::min(std::abs(out.value), static_cast<double>(n_terms));
  return out;
}

double classical_exponent(int j) {
  if (j < 2) throw DomainError("classical Weyl-sum exponent needs j >= 2");
  const double jm1 = j - 1.0;
  return 1.0 / (3.0 * jm1 * jm1 * std::log(12.0 * j * jm1));
}

double conjectured_exponent(int j, double epsilon) {
  if (j < 1) throw DomainError("conjectured exponent needs j >= 1");
  if (epsilon < 0) throw DomainError("epsilon must be nonnegative");
  return 1.0 - 1.0 / j + epsilon;
}

std::vector<double> sequence_points(const SequenceSpec& spec, std::int64_t n_terms) {
  spec.validate();
  if (n_terms < 1) throw DomainError("sequence_points needs n_terms >= 1");
  return polynomial_fractional_parts(monomial(spec.j, spec.beta.value()), 1, n_terms);
}

double erdos_turan_bound(std::span<const double> points, int m) {
  if (m < 1) throw DomainError("Erdos-Turan bound needs m >= 1");
  if (points.empty()) throw SizeError("empty point list");
  const double n = static_cast<double>(points.size());
  long double tail = 0.0L;
  for (int h = 1; h <= m; ++h) {
    long double re = 0.0L;
    long double im = 0.0L;
    for (const double x : points) {
      const long double hx = static_cast<long double>(h) * x;
      const auto z = cis_turns(static_cast<double>(hx - std::floor(hx)));
      re += z.real();
      im += z.imag();
    }
    tail += std::hypot(re, im) / n / h;
  }
  return 6.0 / (m + 1.0) + 4.0 / std::numbers::pi * static_cast<double>(tail);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw SizeError("slope needs >= 2 paired samples");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) throw DomainError("degenerate abscissae");
  return sxy / sxx;
}

std::vector<std::int64_t> geometric_grid(std::int64_t first, std::int64_t last, int count) {
  if (first < 1 || last < first || count < 1) throw DomainError("bad geometric grid");
  if (count == 1) return {first};
  std::vector<std::int64_t> grid;
  const double ratio = std::log(static_cast<double>(last) / static_cast<double>(first));
  for (int k = 0; k < count; ++k) {
    const double v = static_cast<double>(first) * std::exp(ratio * k / (count - 1));
    auto n = static_cast<std::int64_t>(std::llround(v));
    if (k == count - 1) n = last;
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  return grid;
}

ScalingFit discrepancy_scaling_fit(const SequenceSpec& spec, std::span<const std::int64_t> n_grid,
                                   double eta) {
  spec.validate();
  if (n_grid.size() < 4) throw SizeError("scaling fit needs at least 4 grid sizes");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()) || n_grid.front() < 1) {
    throw DomainError("scaling grid must be ascending and positive");
  }
  if (static_cast<double>(n_grid.back()) < 100.0 * static_cast<double>(n_grid.front())) {
    throw SizeError("scaling grid must span at least two decades");
  }
  if (eta < 1.0) throw DomainError("eta must be >= 1");

  const auto points = sequence_points(spec, n_grid.back());
  ScalingFit fit;
  std::vector<double> log_n, log_d;
  std::vector<double> prefix;
  for (const auto n : n_grid) {
    prefix.assign(points.begin(), points.begin() + n);
    const double d = extreme_discrepancy(prefix);
    fit.table.push_back({n, d});
    log_n.push_back(std::log(static_cast<double>(n)));
    log_d.push_back(std::log(d));
  }
  fit.slope = least_squares_slope(log_n, log_d);
  fit.predicted_exponent = -1.0 / (eta * spec.j);
  return fit;
}

}  // namespace floquetlab::number_theory
