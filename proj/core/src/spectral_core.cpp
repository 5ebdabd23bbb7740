#include "floquetlab/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "floquetlab/error.hpp"
#include "floquetlab/phase_walk.hpp"

namespace floquetlab::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Two phases closer than this on the circle are treated as equal.
constexpr double kPoleTolerance = 16.0 * std::numeric_limits<double>::epsilon() * kTwoPi;

double below(double limit, double v) {
  return v < limit ? v : std::nextafter(limit, 0.0);
}

double eval_polynomial(const std::vector<mpq_class>& coeffs, std::int64_t n) {
  mpq_class acc = 0;
  const mpq_class x(mpz_class(static_cast<long>(n)));
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return round_to_double(acc.get_num(), acc.get_den());
}

// Euler-Maclaurin estimate of sum_{n >= dim} n^-s for s > 1.
double power_tail(double s, std::size_t dim) {
  const double d = static_cast<double>(dim);
  return std::pow(d, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(d, -s) +
         s / 12.0 * std::pow(d, -s - 1.0);
}

void check_gamma(double gamma) {
  if (!(gamma > 0.5 && gamma <= 1.0)) {
    throw DomainError("power-law exponent must satisfy 1/2 < gamma <= 1");
  }
}

}  // namespace

BaseSpectrum BaseSpectrum::harmonic(RationalApprox omega_turns, double hbar) {
  return monomial(1, std::move(omega_turns), hbar);
}

BaseSpectrum BaseSpectrum::monomial(int j, RationalApprox beta_turns, double hbar) {
  if (j < 1) throw DomainError("monomial spectrum needs j >= 1");
  BaseSpectrum spec;
  spec.beta.assign(static_cast<std::size_t>(j) + 1, RationalApprox{});
  spec.beta[static_cast<std::size_t>(j)] = std::move(beta_turns);
  spec.hbar = hbar;
  return spec;
}

std::vector<mpq_class> BaseSpectrum::phase_coefficients() const {
  std::vector<mpq_class> out;
  out.reserve(beta.size());
  for (const auto& b : beta) {
    mpq_class c = b.value() * period.value();
    if (unit == PhaseUnit::radians) c *= inverse_two_pi();
    c.canonicalize();
    out.push_back(c);
  }
  return out;
}

void BaseSpectrum::validate() const {
  if (beta.size() < 2) throw DomainError("spectrum needs degree p >= 1");
  if (std::none_of(beta.begin() + 1, beta.end(), [](const auto& b) { return !b.is_zero(); })) {
    throw DomainError("spectrum needs some beta_j with j >= 1 nonzero");
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
  if (sgn(period.value()) <= 0) throw DomainError("kick period must be positive");
}

double KickState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : coefficients) s += std::norm(a);
  return s;
}

KickState KickState::from_amplitudes(std::vector<std::complex<double>> amplitudes) {
  KickState state;
  double norm2 = 0.0;
  for (const auto& a : amplitudes) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw DomainError("non-finite amplitude");
    }
    norm2 += std::norm(a);
  }
  if (!(norm2 > 0.0)) throw DomainError("kick state must be nonzero");
  const double scale = 1.0 / std::sqrt(norm2);
  for (std::size_t n = 0; n < amplitudes.size(); ++n) {
    amplitudes[n] *= scale;
    if (amplitudes[n] != 0.0) state.support.push_back(n);
  }
  state.coefficients = std::move(amplitudes);
  state.normalization = scale;
  return state;
}

void KickState::validate() const {
  if (support.empty()) throw DomainError("kick state has empty support");
  if (std::abs(norm_squared() - 1.0) > 1e-12) throw DomainError("kick state is not normalized");
  for (const auto n : support) {
    if (n >= coefficients.size()) throw DomainError("support index beyond dimension");
  }
}

double KickEnsemble::max_overlap() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    for (std::size_t l = k + 1; l < states.size(); ++l) {
      const auto& a = states[k].coefficients;
      const auto& b = states[l].coefficients;
      std::complex<double> dot = 0.0;
      for (std::size_t n = 0; n < std::min(a.size(), b.size()); ++n) dot += std::conj(a[n]) * b[n];
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

void KickEnsemble::validate(double hbar) const {
  if (strengths.size() != states.size()) throw SizeError("one strength per kick state required");
  for (const auto& s : states) s.validate();
  if (max_overlap() > 1e-12) throw EnsembleError("kick states are not orthogonal");
  for (const double lambda : strengths) {
    if (!std::isfinite(lambda)) throw DomainError("non-finite kick strength");
    if (is_trivial_kick(lambda / hbar)) {
      throw TrivialPerturbationError("kick strength with lambda/hbar = 0 (mod 2 pi)");
    }
  }
}

ThetaSequence ThetaSequence::unperturbed_eigenphases() const {
  ThetaSequence out;
  out.source = source;
  out.turns.reserve(turns.size());
  out.values.reserve(turns.size());
  for (const double t : turns) {
    const double m = t == 0.0 ? 0.0 : below(1.0, 1.0 - t);
    out.turns.push_back(m);
    out.values.push_back(below(kTwoPi, kTwoPi * m));
  }
  return out;
}

std::vector<double> alpha_sequence(const BaseSpectrum& spec, std::int64_t n_terms) {
  spec.validate();
  if (n_terms < 1) throw DomainError("alpha_sequence needs n_terms >= 1");
  std::vector<mpq_class> coeffs;
  for (const auto& b : spec.beta) coeffs.push_back(b.value());
  const double scale = spec.unit == PhaseUnit::turns ? kTwoPi * spec.hbar : spec.hbar;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_terms));
  for (std::int64_t n = 0; n < n_terms; ++n) out.push_back(scale * eval_polynomial(coeffs, n));
  return out;
}

ThetaSequence theta_sequence(const BaseSpectrum& spec, std::int64_t n_terms) {
  spec.validate();
  if (n_terms < 1) throw DomainError("theta_sequence needs n_terms >= 1");
  ThetaSequence out;
  out.source = spec;
  out.turns = polynomial_fractional_parts(spec.phase_coefficients(), 0, n_terms);
  out.values.reserve(out.turns.size());
  for (const double t : out.turns) out.values.push_back(below(kTwoPi, kTwoPi * t));
  return out;
}

KickState power_law_state(double gamma, std::size_t dim, std::span<const std::size_t> support) {
  check_gamma(gamma);
  if (dim < 2) throw SizeError("power-law state needs dim >= 2");
  std::vector<std::size_t> sup(support.begin(), support.end());
  std::sort(sup.begin(), sup.end());
  sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
  if (sup.empty()) throw DomainError("power-law state needs a nonempty support");
  if (sup.front() == 0 || sup.back() >= dim) {
    throw DomainError("power-law support must lie in {1, ..., dim-1}");
  }

  KickState state;
  state.gamma = gamma;
  state.coefficients.assign(dim, 0.0);
  double norm2 = 0.0;
  for (const auto n : sup) norm2 += std::pow(static_cast<double>(n), -2.0 * gamma);
  const double c = 1.0 / std::sqrt(norm2);
  for (const auto n : sup) state.coefficients[n] = c * std::pow(static_cast<double>(n), -gamma);
  state.support = std::move(sup);
  state.normalization = c;
  state.tail_weight = power_tail(2.0 * gamma, dim);
  return state;
}

KickState power_law_state(double gamma, std::size_t dim) {
  if (dim < 2) throw SizeError("power-law state needs dim >= 2");
  std::vector<std::size_t> support(dim - 1);
  for (std::size_t n = 1; n < dim; ++n) support[n - 1] = n;
  return power_law_state(gamma, dim, support);
}

KickEnsemble orthonormal_ensemble(double gamma, std::size_t n_states, std::size_t dim,
                                  std::span<const double> strengths) {
  if (n_states < 1) throw SizeError("ensemble needs at least one state");
  if (dim < 2 || n_states > dim - 1) throw SizeError("dimension too small for the ensemble");
  if (strengths.size() != n_states) throw SizeError("one strength per kick state required");
  KickEnsemble ensemble;
  for (std::size_t k = 0; k < n_states; ++k) {
    std::vector<std::size_t> support;
    for (std::size_t n = k + 1; n < dim; n += n_states) support.push_back(n);
    auto state = power_law_state(gamma, dim, support);
    state.tail_weight /= static_cast<double>(n_states);
    ensemble.states.push_back(std::move(state));
  }
  ensemble.strengths.assign(strengths.begin(), strengths.end());
  return ensemble;
}

BInverse b_inverse_partial(double x, const KickState& state, const ThetaSequence& theta,
                           std::size_t n_terms) {
  if (n_terms > std::min(state.dim(), theta.size())) {
    throw SizeError("n_terms exceeds state or theta length");
  }
  BInverse out;
  long double sum = 0.0L;
  for (std::size_t n = 0; n < n_terms; ++n) {
    const double w = std::norm(state.coefficients[n]);
    if (w == 0.0) continue;
    if (circular_distance(x, theta.values[n]) <= kPoleTolerance) {
      out.pole = n;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    const double s = std::sin(0.5 * (x - theta.values[n]));
    sum += w / (static_cast<long double>(s) * s);
  }
  out.value = static_cast<double>(sum);
  return out;
}

BInverseProduct b_inverse_product(double x, const KickEnsemble& ensemble,
                                  const ThetaSequence& theta, std::size_t n_terms) {
  BInverseProduct out;
  double product = 1.0;
  bool finite = true;
  for (const auto& state : ensemble.states) {
    out.factors.push_back(b_inverse_partial(x, state, theta, n_terms));
    if (out.factors.back().infinite()) {
      finite = false;
    } else {
      product *= out.factors.back().value;
    }
  }
  if (finite) out.product = product;
  return out;
}

std::complex<double> point_mass_prefactor(double lambda_over_hbar) {
  const std::complex<double> mu = std::polar(1.0, lambda_over_hbar) - 1.0;
  return -4.0 * (1.0 + mu) / (mu * mu);
}

double point_mass(double lambda_over_hbar, double b_value) {
  if (is_trivial_kick(lambda_over_hbar)) {
    throw TrivialPerturbationError("point mass undefined for lambda/hbar = 0 (mod 2 pi)");
  }
  if (!(b_value >= 0.0)) throw DomainError("B(x) must be nonnegative");
  const double s = std::sin(0.5 * lambda_over_hbar);
  return b_value / (s * s);
}

double point_mass(double lambda_over_hbar, const BInverse& b_inverse) {
  if (b_inverse.infinite()) {
    if (is_trivial_kick(lambda_over_hbar)) {
      throw TrivialPerturbationError("point mass undefined for lambda/hbar = 0 (mod 2 pi)");
    }
    return 0.0;
  }
  if (!(b_inverse.value > 0.0)) throw DomainError("B^{-1}(x) must be positive");
  return point_mass(lambda_over_hbar, 1.0 / b_inverse.value);
}

double cotangent_residual(double x, const KickState& state, const ThetaSequence& theta,
                          double lambda_over_hbar) {
  if (is_trivial_kick(lambda_over_hbar)) {
    throw TrivialPerturbationError("cot(lambda/2hbar) undefined for lambda/hbar = 0 (mod 2 pi)");
  }
  const std::size_t n_terms = std::min(state.dim(), theta.size());
  long double sum = 0.0L;
  for (std::size_t n = 0; n < n_terms; ++n) {
    const double w = std::norm(state.coefficients[n]);
    if (w == 0.0) continue;
    if (circular_distance(x, theta.values[n]) <= kPoleTolerance) {
      throw PoleError(n, "x coincides with theta_" + std::to_string(n));
    }
    const double half = 0.5 * (x - theta.values[n]);
    sum += w * (static_cast<long double>(std::cos(half)) / std::sin(half));
  }
  const double half_lambda = 0.5 * lambda_over_hbar;
  return static_cast<double>(sum - static_cast<long double>(std::cos(half_lambda)) /
                                       std::sin(half_lambda));
}

GammaWindow gamma_window(int j, double eta) {
  if (j < 1) throw DomainError("gamma window needs j >= 1");
  if (!(eta >= 1.0)) throw DomainError("gamma window needs eta >= 1");
  return {0.5, 0.5 + 1.0 / (2.0 * eta * j)};
}

double circular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

bool is_trivial_kick(double lambda_over_hbar) {
  return std::abs(std::remainder(lambda_over_hbar, kTwoPi)) <= 1e-12;
}

}  // namespace floquetlab::spectral
