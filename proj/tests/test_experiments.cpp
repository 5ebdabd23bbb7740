#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "floquetlab/error.hpp"
#include "floquetlab/experiments.hpp"
#include "oracles.hpp"

using namespace floquetlab;
using namespace floquetlab::experiments;
namespace nt = floquetlab::number_theory;

namespace {

constexpr double kPi = oracle::kPi;

nt::SequenceSpec seq(int j, RationalApprox beta) { return {j, std::move(beta), ""}; }

spectral::ThetaSequence manual_theta(std::vector<double> values) {
  spectral::ThetaSequence t;
  t.values = values;
  for (double v : values) t.turns.push_back(v / (2 * kPi));
  return t;
}

}  // namespace

TEST(MakeInterval, Combescure) {
  const auto j = make_interval(kPi, 16, 0.75, Variant::combescure);
  EXPECT_EQ(j.half_width, 0.125);
  EXPECT_EQ(j.lo, 0.375);
  EXPECT_EQ(j.hi, 0.625);
  EXPECT_EQ(j.length(), 0.25);
}

TEST(MakeInterval, Bourget) {
  const auto j = make_interval(kPi, 16, 0.75, Variant::bourget);
  EXPECT_NEAR(j.half_width, 0.15014030109830622, 1e-16);
  EXPECT_THROW(make_interval(kPi, 2, 0.75, Variant::bourget), DomainError);
}

TEST(MakeInterval, SpillageIsRangeError) {
  EXPECT_THROW(make_interval(0.05, 10, 0.75, Variant::combescure), RangeError);
  EXPECT_THROW(make_interval(2 * kPi - 0.05, 10, 0.75, Variant::combescure), RangeError);
  EXPECT_NO_THROW(make_interval(0.05, 1'000'000, 0.75, Variant::combescure));
  EXPECT_THROW(make_interval(0.0, 10, 0.75, Variant::combescure), DomainError);
}

TEST(CountInterval, Examples) {
  const std::vector<double> pts = {0.1, 0.2, 0.3};
  EXPECT_EQ(count_interval(pts, 0.15, 0.35), 2);
  EXPECT_EQ(count_interval(pts, 0.2, 0.2), 0);
  EXPECT_EQ(count_interval(pts, 0.0, 1.0), 3);
  EXPECT_EQ(count_interval(pts, 0.2, 0.3), 1);  // half-open
}

TEST(CountInterval, MatchesScanOnLargeLists) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  const auto pts = nt::sequence_points(seq(2, golden_rotation()), 100'000);
  for (int trial = 0; trial < 20; ++trial) {
    double a = u(rng), b = u(rng);
    if (b < a) std::swap(a, b);
    EXPECT_EQ(count_interval(pts, a, b), oracle::count_half_open(pts, a, b));
  }
}

TEST(CountSetS, ConstructedExample) {
  std::vector<std::complex<double>> a(6, 0.0);
  a[3] = 0.5;
  a[1] = 0.1;
  a[5] = 0.1;
  auto state = spectral::KickState::from_amplitudes(a);
  const double scale = 1.0 / std::abs(state.coefficients[3]) * 0.5;  // undo normalization
  for (auto& c : state.coefficients) c *= scale;
  const auto theta = manual_theta({0.0, 5.0, 0.5, 2.0, 4.0, 6.25});
  EXPECT_EQ(count_set_S(2.3, state, theta, 6), 1);
  EXPECT_EQ(count_set_S(3.2, state, theta, 6), 0);
  // theta_5 lies 0.053 away from x = 0.02 across the wrap-around; |a_5| = 0.1.
  EXPECT_EQ(count_set_S(0.02, state, theta, 6), 1);
}

TEST(CountSetS, MatchesExhaustiveScan) {
  const std::size_t n = 10'000;
  const auto theta = spectral::theta_sequence(spectral::BaseSpectrum::harmonic(golden_rotation()), n);
  const auto state = spectral::power_law_state(0.75, n);
  std::int64_t want = 0;
  for (std::size_t m = 0; m < n; ++m) {
    const double a = std::abs(state.coefficients[m]);
    if (a > 0 && oracle::circ(1.0, theta.values[m]) <= a) ++want;
  }
  EXPECT_EQ(count_set_S(1.0, state, theta, n), want);
  EXPECT_GT(want, 0);
}

TEST(InequalityCheck, GoldenExample) {
  const auto r = inequality_check(kPi, seq(1, golden_rotation()), 0.75, 4096);
  EXPECT_TRUE(r.interval_fits);
  EXPECT_TRUE(r.inequality_holds());
  EXPECT_LE(r.a_count, r.n);
  // rhs from an independent discrepancy evaluation of the same points
  const auto pts = nt::sequence_points(seq(1, golden_rotation()), 4096);
  EXPECT_EQ(r.rhs, 4096.0 * nt::extreme_discrepancy(pts));
  EXPECT_EQ(r.a_count, oracle::count_half_open(pts, r.interval.lo, r.interval.hi));
}

TEST(InequalityCheck, HandCountedToy) {
  // beta = 1/4: points cycle 1/4, 1/2, 3/4, 0; J = [3/8, 5/8) holds the four 1/2's.
  const auto r = inequality_check(kPi, seq(1, RationalApprox(1, 4)), 0.75, 16);
  EXPECT_EQ(r.a_count, 4);
  EXPECT_EQ(r.lhs, 0.0);      // |4 - 2 * 16^{1/4}|
  EXPECT_EQ(r.rhs, 4.0);      // 16 * 1/4
  EXPECT_TRUE(r.inequality_holds());
}

TEST(InequalityCheck, RationalBetaStillHolds) {
  for (double x : {1.0, 2.0, kPi, 4.5}) {
    for (std::int64_t n : {100, 1000, 10'000}) {
      const auto r = inequality_check(x, seq(1, RationalApprox(1, 3)), 0.75, n);
      EXPECT_TRUE(r.inequality_holds()) << x << " " << n;
    }
  }
}

TEST(InequalityCheck, BourgetVariantRecordsActualSide) {
  InequalityOptions o;
  o.variant = Variant::bourget;
  o.delta = 0.01;
  const auto r = inequality_check(kPi, seq(1, golden_rotation()), 0.75, 10'000, o);
  EXPECT_TRUE(r.actual_inequality_holds());
  EXPECT_NEAR(r.lhs, std::abs(r.a_count - 2 * std::pow(1e4, 2 * (1 - 0.75 - 0.01))), 1e-9);
}

TEST(InequalityCheck, PropagatesRangeError) {
  EXPECT_THROW(inequality_check(0.01, seq(1, golden_rotation()), 0.75, 100), RangeError);
}

TEST(InequalityProperty, HoldsAcrossRandomConfigurations) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ux(0.5, 2 * kPi - 0.5), ug(0.51, 1.0);
  const auto pts = nt::sequence_points(seq(2, sqrt2()), 20'000);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t n = 100 + trial * 199;
    const auto r = inequality_from_points(ux(rng), pts, ug(rng), n, {});
    if (!r.interval_fits) continue;
    EXPECT_TRUE(r.inequality_holds()) << trial;
    EXPECT_TRUE(r.actual_inequality_holds()) << trial;
  }
}

TEST(BLowerBounds, GoldenExample) {
  const std::size_t n = 10'000;
  const auto theta = spectral::theta_sequence(spectral::BaseSpectrum::harmonic(golden_rotation()), n);
  const auto state = spectral::power_law_state(0.6, n);
  const auto b = b_lower_bounds(1.0, state, theta, n);
  ASSERT_TRUE(b.bourget.has_value());
  EXPECT_TRUE(b.combescure_holds());
  EXPECT_TRUE(b.bourget_holds());
  EXPECT_GE(b.b_inverse.value, 4.0 * static_cast<double>(b.s_count));
  const double c2 = state.normalization * state.normalization;
  EXPECT_NEAR(*b.bourget,
              c2 / (kPi * kPi) * static_cast<double>(b.s_count_bourget) * std::log(1e4) / std::pow(1e4, 0.8),
              1e-12 * *b.bourget);
}

TEST(BLowerBounds, EmptySetGivesZeroBound) {
  const auto state = spectral::KickState::from_amplitudes({0.0, 1e-3, 1.0});
  const auto theta = manual_theta({0.0, 1.0, 3.0});
  const auto b = b_lower_bounds(5.0, state, theta, 3);
  EXPECT_EQ(b.s_count, 0);
  EXPECT_EQ(b.combescure, 0.0);
  EXPECT_TRUE(b.combescure_holds());
  EXPECT_FALSE(b.bourget.has_value());
}

TEST(BLowerBounds, PerTermBoundOnRandomStates) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 2 * kPi), a(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::complex<double>> amp(50);
    for (auto& c : amp) c = a(rng);
    const auto state = spectral::KickState::from_amplitudes(amp);
    std::vector<double> th(50);
    for (auto& t : th) t = u(rng);
    const auto b = b_lower_bounds(u(rng), state, manual_theta(th), 50);
    EXPECT_TRUE(b.combescure_holds()) << trial;
  }
}

TEST(ClassifyGrowth, Labels) {
  const std::vector<std::int64_t> up = {2, 5, 10, 22};
  const std::vector<std::int64_t> flat = {3, 4, 4, 4};
  const std::vector<std::int64_t> wobble = {3, 2, 4, 5};
  const std::vector<std::int64_t> slow = {10, 11, 12, 13};
  EXPECT_EQ(classify_growth(up), GrowthLabel::divergent_trend);
  EXPECT_EQ(classify_growth(flat), GrowthLabel::bounded);
  EXPECT_EQ(classify_growth(wobble), GrowthLabel::inconclusive);
  EXPECT_EQ(classify_growth(slow), GrowthLabel::inconclusive);
  EXPECT_EQ(to_string(GrowthLabel::divergent_trend), "divergent-trend");
}

TEST(DefaultXGrid, Formula) {
  const auto g = default_x_grid(5);
  ASSERT_EQ(g.size(), 5u);
  const double phi1 = 0.6180339887498949;
  for (int m = 1; m <= 5; ++m) {
    const double t = m * phi1 + 1.0 / 7.0;
    EXPECT_NEAR(g[static_cast<std::size_t>(m - 1)], 2 * kPi * (t - std::floor(t)), 1e-13);
  }
}

TEST(DivergenceScan, GoldenSweepDiverges) {
  const auto xs = default_x_grid(5);
  const std::vector<std::int64_t> grid = {1000, 4642, 21'544, 100'000};
  const auto r = divergence_scan(seq(1, golden_rotation()), 0.75, xs, grid);
  ASSERT_EQ(r.cells.size(), 20u);
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    EXPECT_EQ(r.label(0, xi), GrowthLabel::divergent_trend) << xi;
    for (std::size_t ni = 0; ni < grid.size(); ++ni) {
      const auto& c = r.cell(0, xi, ni);
      EXPECT_TRUE(c.b_bounds_hold());
      EXPECT_LE(c.s_count, c.n);
      if (c.interval_fits) EXPECT_TRUE(c.inequality_holds());
    }
  }
}

TEST(DivergenceScan, RationalBetaNotAllDivergent) {
  const auto xs = default_x_grid(5);
  const std::vector<std::int64_t> grid = {1000, 4642, 21'544, 100'000};
  const auto r = divergence_scan(seq(1, RationalApprox(1, 3)), 0.75, xs, grid);
  bool all = true;
  for (std::size_t xi = 0; xi < xs.size(); ++xi) all = all && r.label(0, xi) == GrowthLabel::divergent_trend;
  EXPECT_FALSE(all);
}

TEST(DivergenceScan, RejectsOutOfRangeGammaAndShortGrids) {
  const auto xs = default_x_grid(2);
  const std::vector<std::int64_t> grid = {100, 1000, 10'000, 100'000};
  EXPECT_THROW(divergence_scan(seq(1, golden_rotation()), 0.45, xs, grid), DomainError);
  const std::vector<std::int64_t> short_grid = {100, 1000, 10'000};
  EXPECT_THROW(divergence_scan(seq(1, golden_rotation()), 0.75, xs, short_grid), SizeError);
}

TEST(GammaSweep, WindowAnnotation) {
  const auto xs = default_x_grid(2);
  const std::vector<std::int64_t> grid = {100, 1000, 10'000, 30'000};
  const std::vector<double> gammas = {0.6, 0.9, 1.0};
  const auto r = gamma_sweep(seq(2, golden_rotation()), 1.0, gammas, xs, grid);
  EXPECT_EQ(r.inside_window, (std::vector<bool>{true, false, false}));
  EXPECT_EQ(r.eta, 1.0);
  const auto r1 = gamma_sweep(seq(1, golden_rotation()), 1.0, std::vector<double>{0.55, 0.95}, xs, grid);
  EXPECT_EQ(r1.inside_window, (std::vector<bool>{true, true}));
}

TEST(Sweep, IdenticalAcrossThreadCounts) {
  const auto xs = default_x_grid(5);
  const std::vector<std::int64_t> grid = {1000, 3000, 10'000, 30'000};
  const std::vector<double> gammas = {0.6, 0.75};
  SweepOptions one, many;
  many.threads = 8;
  const auto a = scan_grid(seq(2, golden_rotation()), gammas, xs, grid, one);
  const auto b = scan_grid(seq(2, golden_rotation()), gammas, xs, grid, many);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].a_count, b.cells[i].a_count);
    EXPECT_EQ(a.cells[i].s_count, b.cells[i].s_count);
    EXPECT_EQ(a.cells[i].rhs, b.cells[i].rhs);
    EXPECT_EQ(a.cells[i].b_inverse, b.cells[i].b_inverse);
  }
  EXPECT_EQ(a.labels, b.labels);
}
