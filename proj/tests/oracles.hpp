#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library; each quantity is recomputed the slow, obvious way.

#include <Eigen/Dense>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline mpq_class frac(const mpq_class& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - mpq_class(q);
}

// 50-digit decimal stand-ins, independent of any continued-fraction code.
inline mpq_class decimal_50(const char* digits) {
  mpq_class q(mpz_class(digits), mpz_class("100000000000000000000000000000000000000000000000000"));
  q.canonicalize();
  return q;
}

inline mpq_class golden_rotation_50() {
  return decimal_50("61803398874989484820458683436563811772030917980576");
}

inline mpq_class sqrt2_50() {
  return decimal_50("141421356237309504880168872420969807856967187537694");
}

// Euclid on an exact rational.
inline std::vector<mpz_class> euclid(mpq_class x, int depth) {
  std::vector<mpz_class> out;
  for (int i = 0; i < depth; ++i) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    out.push_back(a);
    const mpq_class r = x - mpq_class(a);
    if (r == 0) break;
    x = 1 / r;
  }
  return out;
}

// Brute-force extreme discrepancy in exact arithmetic: every interval whose
// endpoints are sample points or 0/1, each endpoint open or closed.
inline double brute_discrepancy(const std::vector<double>& pts) {
  std::vector<mpq_class> xs;
  for (double p : pts) xs.emplace_back(p);
  std::vector<mpq_class> ends = xs;
  ends.emplace_back(0);
  ends.emplace_back(1);
  const mpq_class n(static_cast<long>(pts.size()));
  mpq_class best = 0;
  for (const auto& a : ends) {
    for (const auto& b : ends) {
      if (b < a) continue;
      for (int closed_a = 0; closed_a < 2; ++closed_a) {
        for (int closed_b = 0; closed_b < 2; ++closed_b) {
          long count = 0;
          for (const auto& x : xs) {
            const bool left = closed_a ? x >= a : x > a;
            const bool right = closed_b ? x <= b : x < b;
            if (left && right) ++count;
          }
          mpq_class dev = mpq_class(count) / n - (b - a);
          if (dev < 0) dev = -dev;
          if (dev > best) best = dev;
        }
      }
    }
  }
  return best.get_d();
}

inline std::complex<long double> weyl_naive(int j, const mpq_class& beta, long h, long n_terms) {
  std::complex<long double> s = 0;
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (long n = 1; n <= n_terms; ++n) {
    mpz_class nj = 1;
    for (int k = 0; k < j; ++k) nj *= n;
    const mpq_class t = frac(mpq_class(nj * h) * beta);
    const long double phase = two_pi * static_cast<long double>(t.get_d());
    s += std::complex<long double>(std::cos(phase), std::sin(phase));
  }
  return s;
}

inline std::int64_t count_half_open(const std::vector<double>& pts, double lo, double hi) {
  std::int64_t c = 0;
  for (double p : pts) c += (p >= lo && p < hi) ? 1 : 0;
  return c;
}

inline double circ(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

// Eigenphases in [0, 2 pi) from a general complex eigensolver, sorted.
inline std::vector<double> dense_eigenphases(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double x = std::arg(es.eigenvalues()(i));
    if (x < 0) x += 2.0 * kPi;
    if (x >= 2.0 * kPi) x -= 2.0 * kPi;
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double nuclear_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

// -4 (1 + mu) / mu^2 with mu = e^{i l} - 1, in extended precision.
inline std::complex<long double> prefactor(long double l) {
  const std::complex<long double> mu = std::polar(1.0L, l) - 1.0L;
  return -4.0L * (1.0L + mu) / (mu * mu);
}

inline std::vector<double> random_points(std::mt19937_64& rng, std::size_t n, bool with_ties) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pts(n);
  for (auto& p : pts) p = u(rng);
  if (with_ties && n > 2) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < n / 4; ++k) pts[pick(rng)] = pts[pick(rng)];
    pts[pick(rng)] = 0.0;
  }
  return pts;
}

}  // namespace oracle
