#include "floquetlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "floquetlab/error.hpp"
#include "floquetlab/parallel.hpp"

namespace floquetlab::experiments {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rounding slack for comparisons between independently rounded sides.
bool at_most(double lhs, double rhs) { return lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs)); }

void check_n_grid(std::span<const std::int64_t> n_grid) {
  if (n_grid.size() < 4) throw SizeError("N grid needs at least 4 sizes");
  if (n_grid.front() < 3) throw DomainError("N grid sizes must be >= 3");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw DomainError("N grid must be strictly ascending");
  }
}

void check_x(double x) {
  if (!(x > 0.0 && x < kTwoPi)) throw DomainError("x must lie in (0, 2 pi)");
}

}  // namespace

double half_width(std::int64_t n, double gamma, Variant variant) {
  if (!std::isfinite(gamma) || gamma <= 0.0) throw DomainError("gamma must be positive");
  const double nn = static_cast<double>(n);
  if (variant == Variant::combescure) {
    if (n < 1) throw DomainError("interval needs N >= 1");
    return std::pow(nn, -gamma);
  }
  if (n < 3) throw DomainError("Bourget interval needs N >= 3");
  return std::pow(nn, 2.0 * (0.5 - gamma)) / std::sqrt(std::log(nn));
}

IntervalJ interval_unchecked(double x, std::int64_t n, double gamma, Variant variant) {
  check_x(x);
  IntervalJ j;
  j.variant = variant;
  j.n = n;
  j.gamma = gamma;
  j.center = x / kTwoPi;
  j.half_width = half_width(n, gamma, variant);
  j.lo = j.center - j.half_width;
  j.hi = j.center + j.half_width;
  return j;
}

IntervalJ make_interval(double x, std::int64_t n, double gamma, Variant variant) {
  const auto j = interval_unchecked(x, n, gamma, variant);
  if (j.lo < 0.0 || j.hi > 1.0) {
    throw RangeError("interval [" + std::to_string(j.lo) + ", " + std::to_string(j.hi) +
                     ") does not fit in [0, 1)");
  }
  return j;
}

std::int64_t count_interval(std::span<const double> points, double lo, double hi) {
  return std::count_if(points.begin(), points.end(), [&](double p) { return lo <= p && p < hi; });
}

std::int64_t count_interval(std::span<const double> points, const IntervalJ& interval) {
  return count_interval(points, interval.lo, interval.hi);
}

std::int64_t count_set_S(double x, const spectral::KickState& state,
                         const spectral::ThetaSequence& theta, std::size_t n) {
  if (n > std::min(state.dim(), theta.size())) throw SizeError("n exceeds state or theta length");
  std::int64_t count = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const double a = std::abs(state.coefficients[m]);
    if (a != 0.0 && spectral::circular_distance(x, theta.values[m]) <= a) ++count;
  }
  return count;
}

std::int64_t count_set_S_bourget(double x, const spectral::KickState& state,
                                 const spectral::ThetaSequence& theta, std::size_t n,
                                 double gamma) {
  if (n > std::min(state.dim(), theta.size())) throw SizeError("n exceeds state or theta length");
  const double radius = kTwoPi * half_width(static_cast<std::int64_t>(n), gamma, Variant::bourget);
  std::int64_t count = 0;
  for (std::size_t m = 0; m < n; ++m) {
    if (state.coefficients[m] != 0.0 &&
        spectral::circular_distance(x, theta.values[m]) <= radius) {
      ++count;
    }
  }
  return count;
}

bool BLowerBounds::combescure_holds() const noexcept {
  return b_inverse.infinite() || b_inverse.value >= combescure * (1.0 - 1e-12);
}

bool BLowerBounds::bourget_holds() const noexcept {
  return !bourget || b_inverse.infinite() || b_inverse.value >= *bourget * (1.0 - 1e-12);
}

BLowerBounds b_lower_bounds(double x, const spectral::KickState& state,
                            const spectral::ThetaSequence& theta, std::size_t n) {
  BLowerBounds out;
  out.b_inverse = spectral::b_inverse_partial(x, state, theta, n);
  out.s_count = count_set_S(x, state, theta, n);
  out.combescure = 4.0 * static_cast<double>(out.s_count);
  if (state.gamma && n >= 3) {
    const double g = *state.gamma;
    const double nn = static_cast<double>(n);
    out.s_count_bourget = count_set_S_bourget(x, state, theta, n, g);
    const double c2 = state.normalization * state.normalization;
    out.bourget = c2 / (std::numbers::pi * std::numbers::pi) *
                  static_cast<double>(out.s_count_bourget) * std::log(nn) /
                  std::pow(nn, 2.0 * (1.0 - g));
  }
  return out;
}

bool CountReport::inequality_holds() const noexcept { return interval_fits && at_most(lhs, rhs); }

bool CountReport::actual_inequality_holds() const noexcept {
  return interval_fits && at_most(lhs_actual, rhs);
}

bool CountReport::b_bounds_hold() const noexcept {
  if (std::isinf(b_inverse)) return true;
  if (b_inverse < b_bound_combescure * (1.0 - 1e-12)) return false;
  return !b_bound_bourget || b_inverse >= *b_bound_bourget * (1.0 - 1e-12);
}

CountReport inequality_from_points(double x, std::span<const double> points, double gamma,
                                   std::int64_t n, const InequalityOptions& options,
                                   std::optional<double> d_n) {
  if (n < 1 || static_cast<std::size_t>(n) > points.size()) {
    throw SizeError("need at least n points");
  }
  check_x(x);
  CountReport r;
  r.x = x;
  r.gamma = gamma;
  r.n = n;
  const auto prefix = points.first(static_cast<std::size_t>(n));
  const double nn = static_cast<double>(n);
  r.rhs = nn * (d_n ? *d_n : number_theory::extreme_discrepancy(prefix));
  r.interval = interval_unchecked(x, n, gamma, options.variant);
  r.interval_fits = r.interval.lo >= 0.0 && r.interval.hi <= 1.0;
  if (!r.interval_fits) return r;
  r.a_count = count_interval(prefix, r.interval);
  const double a = static_cast<double>(r.a_count);
  const double expected = options.variant == Variant::combescure
                              ? 2.0 * std::pow(nn, 1.0 - gamma)
                              : 2.0 * std::pow(nn, 2.0 * (1.0 - gamma - options.delta));
  r.lhs = std::abs(a - expected);
  r.lhs_actual = std::abs(a - nn * r.interval.length());
  return r;
}

CountReport inequality_check(double x, const number_theory::SequenceSpec& spec, double gamma,
                             std::int64_t n, const InequalityOptions& options) {
  (void)make_interval(x, n, gamma, options.variant);
  const auto points = number_theory::sequence_points(spec, n);
  return inequality_from_points(x, points, gamma, n, options);
}

std::string to_string(GrowthLabel label) {
  switch (label) {
    case GrowthLabel::divergent_trend: return "divergent-trend";
    case GrowthLabel::bounded: return "bounded";
    case GrowthLabel::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Variant variant) {
  return variant == Variant::combescure ? "combescure" : "bourget";
}

GrowthLabel classify_growth(std::span<const std::int64_t> counts) {
  if (counts.empty()) return GrowthLabel::inconclusive;
  const bool nondecreasing = std::is_sorted(counts.begin(), counts.end());
  if (nondecreasing && counts.back() > 0 && counts.back() >= 2 * counts.front()) {
    return GrowthLabel::divergent_trend;
  }
  if (counts.size() >= 3) {
    const auto tail = counts.last(3);
    if (tail[0] == tail[1] && tail[1] == tail[2]) return GrowthLabel::bounded;
  }
  return GrowthLabel::inconclusive;
}

const CountReport& SweepResult::cell(std::size_t g, std::size_t xi, std::size_t ni) const {
  return cells.at((g * x_grid.size() + xi) * n_grid.size() + ni);
}

GrowthLabel SweepResult::label(std::size_t g, std::size_t xi) const {
  return labels.at(g * x_grid.size() + xi);
}

namespace {

// Fills the cells and labels of one gamma slice of `out`.
void scan_gamma(std::size_t g,
                const std::vector<double>& points, const std::vector<double>& d_n,
                const spectral::ThetaSequence& theta, const SweepOptions& options,
                SweepResult& out) {
  const double gamma = out.gamma_grid[g];
  const auto n_max = static_cast<std::size_t>(out.n_grid.back());
  const auto state = spectral::power_law_state(gamma, n_max);
  const std::size_t nx = out.x_grid.size();
  const std::size_t nn = out.n_grid.size();
  const std::size_t base = g * nx * nn;

  parallel_for(nx * nn, options.threads, [&](std::size_t idx) {
    const std::size_t xi = idx / nn;
    const std::size_t ni = idx % nn;
    const double x = out.x_grid[xi];
    const std::int64_t n = out.n_grid[ni];
    auto r = inequality_from_points(x, points, gamma, n, options.inequality, d_n[ni]);
    const auto bounds = b_lower_bounds(x, state, theta, static_cast<std::size_t>(n));
    r.s_count = bounds.s_count;
    r.s_count_bourget = bounds.s_count_bourget;
    r.b_inverse = bounds.b_inverse.value;
    r.b_bound_combescure = bounds.combescure;
    r.b_bound_bourget = bounds.bourget;
    out.cells[base + idx] = std::move(r);
  });

  for (std::size_t xi = 0; xi < nx; ++xi) {
    std::vector<std::int64_t> counts;
    for (std::size_t ni = 0; ni < nn; ++ni) counts.push_back(out.cells[base + xi * nn + ni].s_count);
    out.labels[g * nx + xi] = classify_growth(counts);
  }
}

}  // namespace

SweepResult scan_grid(const number_theory::SequenceSpec& spec, std::span<const double> gamma_grid,
                      std::span<const double> x_grid, std::span<const std::int64_t> n_grid,
                      const SweepOptions& options) {
  spec.validate();
  check_n_grid(n_grid);
  if (gamma_grid.empty()) throw SizeError("gamma grid is empty");
  if (x_grid.empty()) throw SizeError("x grid is empty");
  for (const double x : x_grid) check_x(x);
  for (const double g : gamma_grid) {
    if (!(g > 0.5 && g <= 1.0)) throw DomainError("gamma must satisfy 1/2 < gamma <= 1");
  }

  SweepResult out;
  out.j = spec.j;
  out.beta = spec.label.empty() ? spec.beta.to_string() : spec.label;
  out.gamma_grid.assign(gamma_grid.begin(), gamma_grid.end());
  out.x_grid.assign(x_grid.begin(), x_grid.end());
  out.n_grid.assign(n_grid.begin(), n_grid.end());
  out.cells.resize(gamma_grid.size() * x_grid.size() * n_grid.size());
  out.labels.resize(gamma_grid.size() * x_grid.size(), GrowthLabel::inconclusive);

  const std::int64_t n_max = n_grid.back();
  const auto points = number_theory::sequence_points(spec, n_max);
  std::vector<double> d_n(n_grid.size());
  parallel_for(n_grid.size(), options.threads, [&](std::size_t i) {
    d_n[i] = number_theory::extreme_discrepancy(
        std::span<const double>(points).first(static_cast<std::size_t>(n_grid[i])));
  });
  const auto theta =
      spectral::theta_sequence(spectral::BaseSpectrum::monomial(spec.j, spec.beta), n_max);

  for (std::size_t g = 0; g < gamma_grid.size(); ++g) {
    scan_gamma(g, points, d_n, theta, options, out);
  }
  return out;
}

SweepResult divergence_scan(const number_theory::SequenceSpec& spec, double gamma,
                            std::span<const double> x_grid, std::span<const std::int64_t> n_grid,
                            const SweepOptions& options) {
  const double grid[] = {gamma};
  return scan_grid(spec, grid, x_grid, n_grid, options);
}

SweepResult gamma_sweep(const number_theory::SequenceSpec& spec, double eta,
                        std::span<const double> gamma_grid, std::span<const double> x_grid,
                        std::span<const std::int64_t> n_grid, const SweepOptions& options) {
  const auto window = spectral::gamma_window(spec.j, eta);
  auto out = scan_grid(spec, gamma_grid, x_grid, n_grid, options);
  out.eta = eta;
  for (const double g : gamma_grid) out.inside_window.push_back(window.contains(g));
  return out;
}

std::vector<double> default_x_grid(int count) {
  if (count < 1) throw DomainError("x grid needs at least one point");
  const mpq_class golden = golden_rotation().value();
  const mpq_class seventh(1, 7);
  std::vector<double> grid;
  for (int m = 1; m <= count; ++m) {
    const mpq_class t = mpq_class(m) * golden + seventh;
    const auto f = number_theory::fractional_part(RationalApprox(t));
    grid.push_back(kTwoPi * f.to_double());
  }
  return grid;
}

}  // namespace floquetlab::experiments
