#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "floquetlab/number_theory.hpp"
#include "floquetlab/spectral_core.hpp"

namespace floquetlab::experiments {

enum class Variant { combescure, bourget };

/// Shrinking interval J_N(x) around x / 2 pi, in turns.
///   combescure: half-width N^-gamma
///   bourget:    half-width N^{2(1/2 - gamma)} (ln N)^{-1/2}
struct IntervalJ {
  double center = 0.5;
  double half_width = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  Variant variant = Variant::combescure;
  std::int64_t n = 0;
  double gamma = 0.0;

  double length() const noexcept { return hi - lo; }
};

/// Throws RangeError when [lo, hi) does not fit inside [0, 1).
IntervalJ make_interval(double x, std::int64_t n, double gamma, Variant variant);

/// The same interval without the fit check.
IntervalJ interval_unchecked(double x, std::int64_t n, double gamma, Variant variant);

double half_width(std::int64_t n, double gamma, Variant variant);

/// Points p with lo <= p < hi.
std::int64_t count_interval(std::span<const double> points, const IntervalJ& interval);
std::int64_t count_interval(std::span<const double> points, double lo, double hi);

/// #{m < n : a_m != 0, d(x, theta_m) <= |a_m|}, d the circular distance.
std::int64_t count_set_S(double x, const spectral::KickState& state,
                         const spectral::ThetaSequence& theta, std::size_t n);

/// #{m < n : a_m != 0, d(x, theta_m) <= 2 pi w}, w the Bourget half-width at n.
std::int64_t count_set_S_bourget(double x, const spectral::KickState& state,
                                 const spectral::ThetaSequence& theta, std::size_t n, double gamma);

struct BLowerBounds {
  spectral::BInverse b_inverse;
  double combescure = 0.0;              // 4 #S(x)
  std::optional<double> bourget;        // (C^2 / pi^2) #S_b(x) ln N / N^{2(1-gamma)}
  std::int64_t s_count = 0;
  std::int64_t s_count_bourget = 0;

  bool combescure_holds() const noexcept;
  bool bourget_holds() const noexcept;
};

/// The Bourget bound needs a power-law state (state.gamma set) and n >= 3.
BLowerBounds b_lower_bounds(double x, const spectral::KickState& state,
                            const spectral::ThetaSequence& theta, std::size_t n);

struct InequalityOptions {
  Variant variant = Variant::combescure;
  double delta = 0.01;
};

struct CountReport {
  double x = 0.0;
  double gamma = 0.0;
  std::int64_t n = 0;
  bool interval_fits = false;
  IntervalJ interval;
  std::int64_t a_count = 0;
  std::int64_t s_count = 0;
  std::int64_t s_count_bourget = 0;
  double lhs = 0.0;         // |A - 2N^{1-gamma}| or |A - 2N^{2(1-gamma-delta)}|
  double lhs_actual = 0.0;  // |A - N |J||
  double rhs = 0.0;         // N D_N
  double b_inverse = 0.0;   // +inf on a pole
  double b_bound_combescure = 0.0;
  std::optional<double> b_bound_bourget;

  /// lhs <= rhs up to rounding in the last place of N D_N.
  bool inequality_holds() const noexcept;
  bool actual_inequality_holds() const noexcept;
  bool b_bounds_hold() const noexcept;
};

/// Counts {n^j beta} for n = 1..N in J_N(x) and compares with N D_N.
CountReport inequality_check(double x, const number_theory::SequenceSpec& spec, double gamma,
                             std::int64_t n, const InequalityOptions& options = {});

/// The same from precomputed points (at least n of them); D_N of the prefix
/// may be passed in when already known.
CountReport inequality_from_points(double x, std::span<const double> points, double gamma,
                                   std::int64_t n, const InequalityOptions& options,
                                   std::optional<double> d_n = std::nullopt);

enum class GrowthLabel { divergent_trend, bounded, inconclusive };

std::string to_string(GrowthLabel label);
std::string to_string(Variant variant);

/// divergent-trend: nondecreasing and last >= 2 first > 0;
/// bounded: constant over the last three values; otherwise inconclusive.
GrowthLabel classify_growth(std::span<const std::int64_t> counts);

struct SweepOptions {
  InequalityOptions inequality;
  unsigned threads = 1;
};

struct SweepResult {
  int j = 1;
  std::string beta;
  std::vector<double> gamma_grid;
  std::vector<double> x_grid;
  std::vector<std::int64_t> n_grid;
  std::vector<CountReport> cells;      // index (g * |x| + xi) * |N| + ni
  std::vector<GrowthLabel> labels;     // index g * |x| + xi
  std::optional<double> eta;           // set by gamma_sweep
  std::vector<bool> inside_window;     // per gamma, set by gamma_sweep

  const CountReport& cell(std::size_t g, std::size_t xi, std::size_t ni) const;
  GrowthLabel label(std::size_t g, std::size_t xi) const;
};

/// For every x and N: the counting report against one power-law state of
/// dimension max(N) supported on {1, ..., max(N) - 1}, so that #S(x) over
/// the grid counts prefixes of a single state.
SweepResult divergence_scan(const number_theory::SequenceSpec& spec, double gamma,
                            std::span<const double> x_grid, std::span<const std::int64_t> n_grid,
                            const SweepOptions& options = {});

/// divergence_scan for every gamma of the grid, without window annotation.
SweepResult scan_grid(const number_theory::SequenceSpec& spec, std::span<const double> gamma_grid,
                      std::span<const double> x_grid, std::span<const std::int64_t> n_grid,
                      const SweepOptions& options = {});

/// divergence_scan for each gamma, with gamma_window(j, eta) membership.
SweepResult gamma_sweep(const number_theory::SequenceSpec& spec, double eta,
                        std::span<const double> gamma_grid, std::span<const double> x_grid,
                        std::span<const std::int64_t> n_grid, const SweepOptions& options = {});

/// x_m = 2 pi {m (phi - 1) + 1/7}, m = 1..count.
std::vector<double> default_x_grid(int count = 5);

}  // namespace floquetlab::experiments
