#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "floquetlab/number_theory.hpp"
#include "floquetlab/rational.hpp"

namespace floquetlab::spectral {

/// How the polynomial coefficients of a BaseSpectrum are expressed.
///   turns:   alpha_n = 2 pi hbar sum_j beta_j n^j  (beta_j in cycles per n^j)
///   radians: alpha_n =      hbar sum_j beta_j n^j
/// Turns keep the evolution phase exactly rational; radians go through a
/// 100-digit rational value of 1/(2 pi).
enum class PhaseUnit { turns, radians };

/// Unperturbed spectrum alpha_n = hbar sum_j beta_j n^j with kick period T.
struct BaseSpectrum {
  std::vector<RationalApprox> beta;  // beta_0 .. beta_p
  PhaseUnit unit = PhaseUnit::turns;
  double hbar = 1.0;
  RationalApprox period{1};

  /// alpha_n = 2 pi hbar n * omega_turns (harmonic oscillator).
  static BaseSpectrum harmonic(RationalApprox omega_turns, double hbar = 1.0);

  /// alpha_n = 2 pi hbar n^j * beta_turns.
  static BaseSpectrum monomial(int j, RationalApprox beta_turns, double hbar = 1.0);

  /// Rational coefficients c_j with alpha_n T / (2 pi hbar) = sum_j c_j n^j.
  std::vector<mpq_class> phase_coefficients() const;

  void validate() const;
};

/// Coefficients of one kick state in the H0 eigenbasis, truncated at dim.
struct KickState {
  std::vector<std::complex<double>> coefficients;
  std::optional<double> gamma;  // power-law exponent when built by power_law_state
  std::vector<std::size_t> support;
  double normalization = 1.0;   // C in a_n = C n^-gamma
  double tail_weight = 0.0;     // unnormalized sum_{n >= dim} n^-2gamma

  std::size_t dim() const noexcept { return coefficients.size(); }
  double norm_squared() const;

  /// Normalizes arbitrary amplitudes; support is the set of nonzero entries.
  static KickState from_amplitudes(std::vector<std::complex<double>> amplitudes);

  void validate() const;
};

struct KickEnsemble {
  std::vector<KickState> states;
  std::vector<double> strengths;  // lambda_k, action units

  std::size_t rank() const noexcept { return states.size(); }

  /// Max |<psi_k|psi_l>| over k != l.
  double max_overlap() const;

  /// Checks orthonormality and lambda_k / hbar != 0 (mod 2 pi).
  void validate(double hbar) const;
};

/// theta_n = 2 pi {alpha_n T / (2 pi hbar)} for n = 0 .. length-1.
struct ThetaSequence {
  std::vector<double> turns;   // {alpha_n T / (2 pi hbar)} in [0,1)
  std::vector<double> values;  // 2 pi * turns, in [0, 2 pi)
  BaseSpectrum source;

  std::size_t size() const noexcept { return values.size(); }

  /// Eigenphases of U = diag(exp(-i alpha_n T / hbar)), i.e. -theta_n mod 2 pi.
  ThetaSequence unperturbed_eigenphases() const;
};

/// Result of a B^{-1} partial sum; a pole is reported with its index instead
/// of a floating infinity.
struct BInverse {
  double value = 0.0;
  std::optional<std::size_t> pole;

  bool infinite() const noexcept { return pole.has_value(); }
};

struct GammaWindow {
  double lo = 0.5;
  double hi = 1.0;

  bool contains(double gamma) const noexcept { return gamma > lo && gamma < hi; }
};

std::vector<double> alpha_sequence(const BaseSpectrum& spec, std::int64_t n_terms);

ThetaSequence theta_sequence(const BaseSpectrum& spec, std::int64_t n_terms);

/// a_n = C n^-gamma on `support`, zero elsewhere, normalized to unit norm.
/// Requires 1/2 < gamma <= 1, dim >= 2 and support within {1, ..., dim-1}.
KickState power_law_state(double gamma, std::size_t dim, std::span<const std::size_t> support);

/// Same, supported on {1, ..., dim-1}.
KickState power_law_state(double gamma, std::size_t dim);

/// n_states power-law states on interleaved index classes: state k (0-based)
/// lives on {n in [1, dim) : n = k + 1 (mod n_states)}.
KickEnsemble orthonormal_ensemble(double gamma, std::size_t n_states, std::size_t dim,
                                  std::span<const double> strengths);

/// sum_{n < n_terms} |a_n|^2 / sin^2((x - theta_n) / 2).
BInverse b_inverse_partial(double x, const KickState& state, const ThetaSequence& theta,
                           std::size_t n_terms);

/// Spectral mass B(x) / sin^2(lambda / 2 hbar) of a point e^{ix}, given B(x).
/// Throws TrivialPerturbationError when lambda/hbar = 0 (mod 2 pi).
double point_mass(double lambda_over_hbar, double b_value);

/// Same, given B^{-1}(x); a pole of B^{-1} means B(x) = 0 and carries no mass.
double point_mass(double lambda_over_hbar, const BInverse& b_inverse);

/// The prefactor -4(1 + mu) / mu^2 with mu = exp(i lambda/hbar) - 1, evaluated
/// in complex arithmetic.
std::complex<double> point_mass_prefactor(double lambda_over_hbar);

/// B_k^{-1}(x) for every state of an ensemble, and their product when all
/// factors are finite.
struct BInverseProduct {
  std::vector<BInverse> factors;
  std::optional<double> product;  // empty when some factor is infinite

  bool every_factor_finite() const noexcept { return product.has_value(); }
};

BInverseProduct b_inverse_product(double x, const KickEnsemble& ensemble,
                                  const ThetaSequence& theta, std::size_t n_terms);

/// sum_n |a_n|^2 cot((x - theta_n) / 2) - cot(lambda / 2 hbar).
/// Throws PoleError when x hits some theta_n carrying weight.
double cotangent_residual(double x, const KickState& state, const ThetaSequence& theta,
                          double lambda_over_hbar);

/// (1/2, 1/2 + 1/(2 eta j)).
GammaWindow gamma_window(int j, double eta);

/// Circular distance on [0, 2 pi).
double circular_distance(double a, double b);

/// True when lambda/hbar = 0 (mod 2 pi) to within 1e-12.
bool is_trivial_kick(double lambda_over_hbar);

}  // namespace floquetlab::spectral
