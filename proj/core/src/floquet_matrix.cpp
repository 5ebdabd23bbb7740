#include "floquetlab/floquet_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <numeric>

#include "floquetlab/error.hpp"
#include "floquetlab/phase_walk.hpp"

namespace floquetlab::floquet {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t fnv1a(const void* data, std::size_t bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

double phase_of(cd z) {
  double x = std::arg(z) + 0.0;  // folds -0 into +0
  if (x < 0.0) x += kTwoPi;
  return x < kTwoPi ? x : std::nextafter(kTwoPi, 0.0);
}

Eigen::VectorXcd as_vector(const spectral::KickState& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t n = 0; n < s.dim(); ++n) v(static_cast<Eigen::Index>(n)) = s.coefficients[n];
  return v;
}

// Diagonal of U.
Eigen::VectorXcd unperturbed_diagonal(const spectral::ThetaSequence& theta) {
  Eigen::VectorXcd u(static_cast<Eigen::Index>(theta.size()));
  for (std::size_t n = 0; n < theta.size(); ++n) {
    u(static_cast<Eigen::Index>(n)) = std::conj(cis_turns(theta.turns[n]));
  }
  return u;
}

cd kick_factor(double lambda_over_hbar) { return std::polar(1.0, lambda_over_hbar) - 1.0; }

struct Schur {
  std::vector<double> phases;
  Eigen::MatrixXcd vectors;
  double modulus_defect = 0.0;
};

Schur schur_eigen(const Eigen::MatrixXcd& v) {
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(v, true);
  if (schur.info() != Eigen::Success) throw ToleranceError("Schur factorization did not converge");
  const auto& t = schur.matrixT();
  const auto n = t.rows();
  const double tol = 1e-10 * static_cast<double>(std::max<Eigen::Index>(n, 1));
  double off = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) off = std::max(off, std::abs(t(i, j)));
  }
  if (off > tol) throw ToleranceError("matrix is not normal to tolerance");

  Schur out;
  std::vector<double> raw(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    out.modulus_defect = std::max(out.modulus_defect, std::abs(std::abs(t(i, i)) - 1.0));
    raw[static_cast<std::size_t>(i)] = phase_of(t(i, i));
  }
  if (out.modulus_defect > 1e-10) throw ToleranceError("eigenvalue off the unit circle");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return raw[static_cast<std::size_t>(a)] < raw[static_cast<std::size_t>(b)];
  });
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    out.phases.push_back(raw[static_cast<std::size_t>(src)]);
    out.vectors.col(i) = schur.matrixU().col(src);
  }
  return out;
}

}  // namespace

double FloquetMatrix::unitarity_defect() const {
  const Eigen::MatrixXcd g = entries.adjoint() * entries -
                             Eigen::MatrixXcd::Identity(entries.rows(), entries.cols());
  return g.cwiseAbs().maxCoeff();
}

std::uint64_t fingerprint(const Eigen::MatrixXcd& m) {
  return fnv1a(m.data(), static_cast<std::size_t>(m.size()) * sizeof(cd));
}

std::uint64_t fingerprint(const std::vector<cd>& v) { return fnv1a(v.data(), v.size() * sizeof(cd)); }

spectral::KickState truncate_state(const spectral::KickState& state, std::size_t dim,
                                   double* lost) {
  spectral::KickState out = state;
  double dropped = 0.0;
  for (std::size_t n = dim; n < state.dim(); ++n) dropped += std::norm(state.coefficients[n]);
  out.coefficients.resize(dim, 0.0);
  std::erase_if(out.support, [dim](std::size_t n) { return n >= dim; });
  const double kept = out.norm_squared();
  if (!(kept > 0.0) || out.support.empty()) {
    throw EnsembleError("kick state vanishes after truncation");
  }
  if (dim < state.dim()) {
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& a : out.coefficients) a *= scale;
    out.normalization *= scale;
  }
  if (lost != nullptr) *lost = dropped;
  return out;
}

FloquetMatrix build_floquet(const spectral::BaseSpectrum& spec,
                            const spectral::KickEnsemble& ensemble, std::size_t dim,
                            Convention convention) {
  spec.validate();
  if (dim < 2) throw SizeError("Floquet matrix needs dim >= 2");
  if (dim > kMaxDim) throw SizeError("Floquet matrix dimension above 4096");
  if (ensemble.strengths.size() != ensemble.states.size()) {
    throw SizeError("one strength per kick state required");
  }

  FloquetMatrix v;
  v.convention = convention;
  v.spec = spec;
  v.theta = spectral::theta_sequence(spec, static_cast<std::int64_t>(dim));
  v.ensemble.strengths = ensemble.strengths;
  for (const auto& state : ensemble.states) {
    double lost = 0.0;
    v.ensemble.states.push_back(truncate_state(state, dim, &lost));
    v.truncation_loss.push_back(lost);
  }
  v.ensemble.validate(spec.hbar);

  const Eigen::VectorXcd u = unperturbed_diagonal(v.theta);
  v.entries = u.asDiagonal().toDenseMatrix();
  for (std::size_t k = 0; k < v.ensemble.rank(); ++k) {
    const Eigen::VectorXcd psi = as_vector(v.ensemble.states[k]);
    const double lh = v.ensemble.strengths[k] / spec.hbar;
    if (convention == Convention::additive_r_k) {
      // mu psi (psi^dagger U)
      const Eigen::RowVectorXcd row = psi.adjoint() * u.asDiagonal();
      v.entries.noalias() += kick_factor(lh) * psi * row;
    } else {
      // U (nu psi psi^dagger); the projectors commute, so the product of the
      // exponentials is I + sum_k nu_k P_k.
      const Eigen::VectorXcd col = u.asDiagonal() * psi;
      v.entries.noalias() += kick_factor(-lh) * col * psi.adjoint();
    }
  }
  const double defect = v.unitarity_defect();
  if (defect > 1e-10 * static_cast<double>(dim)) {
    throw ToleranceError("Floquet matrix fails the unitarity check");
  }
  v.fingerprint = fingerprint(v.entries);
  return v;
}

double perturbation_trace_norm(double lambda_over_hbar) {
  return std::sqrt(2.0 * (1.0 - std::cos(lambda_over_hbar)));
}

Eigen::MatrixXcd perturbation_term(const FloquetMatrix& v, std::size_t k) {
  if (k >= v.ensemble.rank()) throw DomainError("kick index out of range");
  const Eigen::VectorXcd psi = as_vector(v.ensemble.states[k]);
  const Eigen::VectorXcd u = unperturbed_diagonal(v.theta);
  const Eigen::RowVectorXcd row = psi.adjoint() * u.asDiagonal();
  return kick_factor(v.ensemble.strengths[k] / v.spec.hbar) * psi * row;
}

double trace_norm(const Eigen::MatrixXcd& m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

EigenDecomposition eigen_decompose(const FloquetMatrix& v) { return eigen_decompose(v, v.ensemble); }

EigenDecomposition eigen_decompose(const FloquetMatrix& v, const spectral::KickEnsemble& ensemble) {
  if (v.unitarity_defect() > 1e-10 * static_cast<double>(v.dim())) {
    throw ToleranceError("input matrix is not unitary to tolerance");
  }
  auto schur = schur_eigen(v.entries);
  EigenDecomposition d;
  d.eigenphases = std::move(schur.phases);
  d.eigenvectors = std::move(schur.vectors);
  d.modulus_defect = schur.modulus_defect;
  d.matrix_fingerprint = v.fingerprint;
  for (const auto& original : ensemble.states) {
    const auto state = truncate_state(original, v.dim());
    const Eigen::VectorXcd overlaps = d.eigenvectors.adjoint() * as_vector(state);
    std::vector<double> w(static_cast<std::size_t>(overlaps.size()));
    for (Eigen::Index i = 0; i < overlaps.size(); ++i) {
      w[static_cast<std::size_t>(i)] = std::norm(overlaps(i));
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-10) throw ToleranceError("spectral weights do not sum to 1");
    d.weights.push_back(std::move(w));
    d.state_fingerprints.push_back(fingerprint(state.coefficients));
  }
  return d;
}

DynamicsTrace evolve(const FloquetMatrix& v, const spectral::KickState& state,
                     const spectral::BaseSpectrum& spec, std::int64_t n_kicks) {
  if (n_kicks < 1) throw DomainError("evolve needs n_kicks >= 1");
  const auto truncated = truncate_state(state, v.dim());
  const Eigen::VectorXcd psi = as_vector(truncated);
  const auto alpha = spectral::alpha_sequence(spec, static_cast<std::int64_t>(v.dim()));
  const auto energy_of = [&](const Eigen::VectorXcd& x) {
    long double e = 0.0L;
    for (Eigen::Index m = 0; m < x.size(); ++m) {
      e += static_cast<long double>(alpha[static_cast<std::size_t>(m)]) * std::norm(x(m));
    }
    return static_cast<double>(e);
  };

  DynamicsTrace trace;
  trace.matrix_fingerprint = v.fingerprint;
  trace.state_fingerprint = fingerprint(truncated.coefficients);
  trace.survival.reserve(static_cast<std::size_t>(n_kicks) + 1);
  trace.energy.reserve(static_cast<std::size_t>(n_kicks) + 1);

  if (static_cast<std::size_t>(n_kicks) > v.dim()) {
    trace.spectral_route = true;
    const auto schur = schur_eigen(v.entries);
    const Eigen::VectorXcd b = schur.vectors.adjoint() * psi;
    Eigen::VectorXcd z(b.size());
    for (std::int64_t n = 0; n <= n_kicks; ++n) {
      cd c = 0.0;
      for (Eigen::Index i = 0; i < b.size(); ++i) {
        const cd phase = std::polar(1.0, static_cast<double>(n) * schur.phases[static_cast<std::size_t>(i)]);
        z(i) = b(i) * phase;
        c += std::norm(b(i)) * phase;
      }
      trace.survival.push_back(c);
      trace.energy.push_back(energy_of(schur.vectors * z));
    }
  } else {
    Eigen::VectorXcd x = psi;
    for (std::int64_t n = 0; n <= n_kicks; ++n) {
      if (n > 0) x = v.entries * x;
      trace.survival.push_back(psi.dot(x));
      trace.energy.push_back(energy_of(x));
    }
  }
  return trace;
}

WienerEstimate wiener_average(const DynamicsTrace& trace, const EigenDecomposition& decomposition,
                              std::size_t k) {
  if (trace.matrix_fingerprint != decomposition.matrix_fingerprint) {
    throw ProvenanceError("trace and decomposition come from different matrices");
  }
  if (k >= decomposition.weights.size()) throw ProvenanceError("kick index out of range");
  if (trace.state_fingerprint != decomposition.state_fingerprints[k]) {
    throw ProvenanceError("trace was not generated from kick state k");
  }
  if (trace.survival.size() < 2) throw SizeError("trace needs at least one kick");

  WienerEstimate out;
  out.horizon = static_cast<std::int64_t>(trace.survival.size()) - 1;
  long double sum = 0.0L;
  for (std::size_t n = 1; n < trace.survival.size(); ++n) sum += std::norm(trace.survival[n]);
  out.cesaro_mean = static_cast<double>(sum / out.horizon);
  long double sq = 0.0L;
  for (const double w : decomposition.weights[k]) sq += static_cast<long double>(w) * w;
  out.point_mass_sum = static_cast<double>(sq);
  return out;
}

std::vector<std::optional<double>> secular_residuals(const FloquetMatrix& v,
                                                     const EigenDecomposition& decomposition) {
  if (v.ensemble.rank() != 1) throw DomainError("secular equation applies to rank-1 kicks");
  if (decomposition.matrix_fingerprint != v.fingerprint) {
    throw ProvenanceError("decomposition belongs to a different matrix");
  }
  const auto phases = v.theta.unperturbed_eigenphases();
  double lh = v.ensemble.strengths[0] / v.spec.hbar;
  if (v.convention == Convention::exponential_product) lh = -lh;
  std::vector<std::optional<double>> out;
  out.reserve(decomposition.eigenphases.size());
  for (std::size_t i = 0; i < decomposition.eigenphases.size(); ++i) {
    if (decomposition.weights[0][i] < 1e-20) {
      out.emplace_back();
      continue;
    }
    out.emplace_back(spectral::cotangent_residual(decomposition.eigenphases[i],
                                                  v.ensemble.states[0], phases, lh));
  }
  return out;
}

}  // namespace floquetlab::floquet
