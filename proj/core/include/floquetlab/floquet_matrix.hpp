#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "floquetlab/spectral_core.hpp"

namespace floquetlab::floquet {

/// additive_r_k:        V = U + sum_k (e^{+i lambda_k/hbar} - 1) |psi_k><psi_k| U
/// exponential_product: V = U prod_k exp(-i lambda_k P_k / hbar)
/// with U = diag(exp(-i alpha_n T / hbar)).
enum class Convention { additive_r_k, exponential_product };

inline constexpr std::size_t kMaxDim = 4096;

struct FloquetMatrix {
  Eigen::MatrixXcd entries;
  Convention convention = Convention::additive_r_k;
  spectral::BaseSpectrum spec;
  spectral::KickEnsemble ensemble;     // truncated to dim and renormalized
  spectral::ThetaSequence theta;       // theta_0 .. theta_{dim-1}
  std::vector<double> truncation_loss; // per state, weight dropped beyond dim
  std::uint64_t fingerprint = 0;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries.rows()); }

  /// max |(V^dagger V - I)_{ij}|.
  double unitarity_defect() const;
};

struct EigenDecomposition {
  std::vector<double> eigenphases;             // sorted, in [0, 2 pi)
  Eigen::MatrixXcd eigenvectors;               // column i belongs to eigenphases[i]
  std::vector<std::vector<double>> weights;    // weights[k][i] = |<psi_k|v_i>|^2
  double modulus_defect = 0.0;                 // max ||e_i| - 1|
  std::uint64_t matrix_fingerprint = 0;
  std::vector<std::uint64_t> state_fingerprints;
};

struct DynamicsTrace {
  std::vector<std::complex<double>> survival;  // c_n = <psi|V^n|psi>, n = 0 .. n_kicks
  std::vector<double> energy;                  // <H0> after n kicks
  bool spectral_route = false;                 // phases from the eigenbasis, not mat-vec
  std::uint64_t matrix_fingerprint = 0;
  std::uint64_t state_fingerprint = 0;
};

struct WienerEstimate {
  double cesaro_mean = 0.0;      // (1/T) sum_{n=1}^{T} |c_n|^2
  double point_mass_sum = 0.0;   // sum_i w_{k,i}^2
  std::int64_t horizon = 0;      // T
};

/// Truncates and renormalizes every kick state to `dim`, then assembles V.
/// Throws SizeError for dim outside [2, kMaxDim], EnsembleError when the
/// truncated states are not orthonormal, TrivialPerturbationError for a kick
/// with lambda/hbar = 0 (mod 2 pi), ToleranceError when V fails the unitarity
/// check ||V^dagger V - I||_max <= 1e-10 dim.
FloquetMatrix build_floquet(const spectral::BaseSpectrum& spec,
                            const spectral::KickEnsemble& ensemble, std::size_t dim,
                            Convention convention = Convention::additive_r_k);

/// sqrt(2 (1 - cos(lambda/hbar))) = |e^{i lambda/hbar} - 1|.
double perturbation_trace_norm(double lambda_over_hbar);

/// R_k = (e^{+i lambda_k/hbar} - 1) |psi_k><psi_k| U as a dense matrix.
Eigen::MatrixXcd perturbation_term(const FloquetMatrix& v, std::size_t k);

/// Sum of singular values.
double trace_norm(const Eigen::MatrixXcd& m);

/// Eigenphases and spectral weights of V via a complex Schur factorization.
/// The triangular factor must come out diagonal and of unit modulus to 1e-10;
/// otherwise ToleranceError.
EigenDecomposition eigen_decompose(const FloquetMatrix& v);

/// Same, with weights taken against `ensemble` (truncated and renormalized to
/// dim) instead of the matrix's own kick states.
EigenDecomposition eigen_decompose(const FloquetMatrix& v, const spectral::KickEnsemble& ensemble);

/// Survival amplitudes and energy expectations for n = 0 .. n_kicks. When
/// n_kicks > dim the powers V^n come from the eigenbasis.
DynamicsTrace evolve(const FloquetMatrix& v, const spectral::KickState& state,
                     const spectral::BaseSpectrum& spec, std::int64_t n_kicks);

/// Cesaro mean of |c_n|^2 at the full horizon next to sum_i w_{k,i}^2.
/// Throws ProvenanceError unless trace and decomposition come from the same
/// matrix and the trace's state is kick state k.
WienerEstimate wiener_average(const DynamicsTrace& trace, const EigenDecomposition& decomposition,
                              std::size_t k);

/// For a rank-1 matrix: the secular-equation residual at every eigenphase,
/// evaluated against the unperturbed eigenphases of U with the kick sign of
/// the matrix's convention. Eigenvectors orthogonal to the kick state
/// (weight below 1e-20) do not take part and get no value.
std::vector<std::optional<double>> secular_residuals(const FloquetMatrix& v,
                                                     const EigenDecomposition& decomposition);

/// Kick state truncated to dim and renormalized; the dropped weight goes to
/// `lost` when given. Throws EnsembleError if nothing is left.
spectral::KickState truncate_state(const spectral::KickState& state, std::size_t dim,
                                   double* lost = nullptr);

/// FNV-1a over the raw bytes of the data.
std::uint64_t fingerprint(const Eigen::MatrixXcd& m);
std::uint64_t fingerprint(const std::vector<std::complex<double>>& v);

}  // namespace floquetlab::floquet
