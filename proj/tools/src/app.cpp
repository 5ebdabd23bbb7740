#include "app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "floquetlab/error.hpp"
#include "floquetlab/experiments.hpp"
#include "floquetlab/floquet_matrix.hpp"
#include "floquetlab/number_theory.hpp"
#include "floquetlab/spectral_core.hpp"
#include "manifest.hpp"
#include "parse.hpp"
#include "table.hpp"

#ifndef FLOQUETLAB_VERSION
#define FLOQUETLAB_VERSION "unknown"
#endif

namespace floquetlab::cli {

namespace {

namespace fs = std::filesystem;
namespace nt = number_theory;
using json = nlohmann::ordered_json;

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::int64_t kMaxPoints = 20'000'000;
constexpr double kResidualTolerance = 1e-6;
constexpr double kWienerTolerance = 0.02;

struct Common {
  std::string out;
  unsigned threads = 1;
  int precision = 0;
  bool force = false;
};

struct RunOutput {
  std::vector<std::pair<std::string, ResultTable>> tables;
  std::vector<std::pair<std::string, json>> documents;
  std::vector<std::string> violations;
  std::vector<std::string> notes;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--out", common.out, "Output directory (default: floquetlab-runs/<command>-<hash>)");
  sub->add_option("--threads", common.threads, "Worker threads for sweeps")
      ->capture_default_str()
      ->check(CLI::Range(1u, 256u));
  sub->add_option("--precision", common.precision,
                  "Minimum denominator bits for named constants (0: 200 CF terms)")
      ->capture_default_str()
      ->check(CLI::Range(0, 100000));
  sub->add_flag("--force", common.force, "Recompute even when a matching run exists");
}

// Every option that influences results, with the value as given or its default.
std::map<std::string, std::string> collect_params(const CLI::App* sub) {
  static const std::vector<std::string> kSkip = {"help", "out", "threads", "force"};
  std::map<std::string, std::string> params;
  for (const auto* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (std::find(kSkip.begin(), kSkip.end(), name) != kSkip.end()) continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
    } else {
      value = opt->get_default_str();
    }
    if (opt->count() > 0 || !value.empty()) params[name] = value;
  }
  return params;
}

// ----------------------------------------------------------------------------
// Shared spectrum / kick construction for `spectrum` and `dynamics`.

struct SpectrumFlags {
  std::string coeffs = "0,golden";
  std::string unit = "turns";
  double hbar = 1.0;
  std::string period = "1";
  int rank = 1;
  double gamma = 0.75;
  std::string lambdas = "1";
  std::size_t dim = 64;
  std::string convention = "additive";
  std::string amplitudes;
};

void add_spectrum_flags(CLI::App* sub, SpectrumFlags& f) {
  sub->add_option("--coeffs", f.coeffs, "beta_0,...,beta_p of the base spectrum")->capture_default_str();
  sub->add_option("--unit", f.unit, "Unit of the coefficients")
      ->capture_default_str()
      ->check(CLI::IsMember({"turns", "radians"}));
  sub->add_option("--hbar", f.hbar, "Reduced Planck constant")->capture_default_str();
  sub->add_option("--period", f.period, "Kick period T (exact rational or decimal)")->capture_default_str();
  sub->add_option("--rank", f.rank, "Number of kick states")->capture_default_str()->check(CLI::Range(0, 4096));
  sub->add_option("--gamma", f.gamma, "Power-law exponent of the kick states")->capture_default_str();
  sub->add_option("--lambdas", f.lambdas, "Kick strengths (one, or one per state; 'pi' forms allowed)")
      ->capture_default_str();
  sub->add_option("--dim", f.dim, "Truncation dimension")->capture_default_str();
  sub->add_option("--convention", f.convention, "Floquet operator convention")
      ->capture_default_str()
      ->check(CLI::IsMember({"additive", "product"}));
  sub->add_option("--amplitudes", f.amplitudes,
                  "Explicit real amplitudes of a single kick state (normalized on input)");
}

struct Model {
  spectral::BaseSpectrum spec;
  spectral::KickEnsemble ensemble;
  std::optional<spectral::KickState> probe;  // state of a rank-0 run
  floquet::Convention convention = floquet::Convention::additive_r_k;
};

Model build_model(const SpectrumFlags& f, int precision) {
  if (f.dim > floquet::kMaxDim) {
    throw ResourceError("dimension " + std::to_string(f.dim) + " exceeds the dense limit of 4096");
  }
  if (f.dim < 2) throw UsageError("--dim must be at least 2");
  if (!(f.hbar > 0.0) || !std::isfinite(f.hbar)) throw UsageError("--hbar must be positive");
  Model m;
  m.spec.beta = parse_coeffs(f.coeffs, precision);
  m.spec.unit = f.unit == "radians" ? spectral::PhaseUnit::radians : spectral::PhaseUnit::turns;
  m.spec.hbar = f.hbar;
  m.spec.period = parse_beta(f.period, precision);
  try {
    m.spec.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  m.convention = f.convention == "product" ? floquet::Convention::exponential_product
                                           : floquet::Convention::additive_r_k;

  std::optional<spectral::KickState> explicit_state;
  if (!f.amplitudes.empty()) {
    if (f.rank > 1) throw UsageError("--amplitudes describes a single state; use --rank 0 or 1");
    std::vector<std::complex<double>> amps;
    for (const double a : parse_angle_list(f.amplitudes)) amps.emplace_back(a, 0.0);
    if (amps.size() > f.dim) throw UsageError("more amplitudes than --dim");
    amps.resize(f.dim, 0.0);
    try {
      explicit_state = spectral::KickState::from_amplitudes(std::move(amps));
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }

  if (f.rank == 0) {
    m.probe = explicit_state ? *explicit_state : spectral::power_law_state(f.gamma, f.dim);
    return m;
  }
  auto lambdas = parse_angle_list(f.lambdas);
  if (lambdas.size() == 1) lambdas.assign(static_cast<std::size_t>(f.rank), lambdas.front());
  if (lambdas.size() != static_cast<std::size_t>(f.rank)) {
    throw UsageError("--lambdas needs one value or one per kick state");
  }
  if (explicit_state) {
    m.ensemble.states = {*explicit_state};
    m.ensemble.strengths = lambdas;
  } else {
    if (!(f.gamma > 0.5 && f.gamma <= 1.0)) throw UsageError("--gamma must satisfy 1/2 < gamma <= 1");
    if (static_cast<std::size_t>(f.rank) > f.dim - 1) throw UsageError("--rank too large for --dim");
    m.ensemble = spectral::orthonormal_ensemble(f.gamma, static_cast<std::size_t>(f.rank), f.dim, lambdas);
  }
  for (const double l : lambdas) {
    if (spectral::is_trivial_kick(l / f.hbar)) {
      throw UsageError("kick strength with lambda/hbar = 0 (mod 2 pi)");
    }
  }
  return m;
}

// Ensemble used for spectral weights: the kick states, or the probe state.
spectral::KickEnsemble weight_ensemble(const Model& m) {
  if (!m.probe) return m.ensemble;
  spectral::KickEnsemble e;
  e.states = {*m.probe};
  e.strengths = {0.0};
  return e;
}

// ----------------------------------------------------------------------------
// discrepancy

struct DiscrepancyFlags {
  int j = 1;
  std::string beta;
  std::string n_grid = "1e3:1e6:4";
  int m = 64;
  double eta = 1.0;
};

RunOutput cmd_discrepancy(const DiscrepancyFlags& f, const Common& common) {
  nt::SequenceSpec spec{f.j, parse_beta(f.beta, common.precision), f.beta};
  const auto grid = parse_n_grid(f.n_grid);
  if (grid.size() < 2) throw UsageError("--n-grid needs at least two sizes for a slope");
  if (grid.back() > kMaxPoints) throw ResourceError("N above 2e7 points");
  if (!(f.eta >= 1.0)) throw UsageError("--eta must be >= 1");

  const auto points = nt::sequence_points(spec, grid.back());
  ResultTable table({{"N", "count"}, {"D_N", ""}, {"ET_bound", ""}});
  std::vector<double> log_n, log_d;
  RunOutput run;
  for (const auto n : grid) {
    const std::span<const double> prefix(points.data(), static_cast<std::size_t>(n));
    const double d = nt::extreme_discrepancy(prefix);
    const double et = nt::erdos_turan_bound(prefix, f.m);
    if (et < d) run.violations.push_back("Erdos-Turan bound below D_N at N=" + std::to_string(n));
    table.add_row({n, d, et});
    log_n.push_back(std::log(static_cast<double>(n)));
    log_d.push_back(std::log(d));
  }
  const double slope = nt::least_squares_slope(log_n, log_d);
  const double predicted = -1.0 / (f.eta * f.j);
  table.set_footer({std::string("slope"), slope, predicted});
  run.notes.push_back("fitted slope " + format_double(slope) + " (predicted " + format_double(predicted) + ")");
  run.tables.emplace_back("discrepancy.csv", std::move(table));
  return run;
}

// ----------------------------------------------------------------------------
// weyl

struct WeylFlags {
  int j = 1;
  std::string beta;
  std::string n_grid = "1e2:1e5:4";
  std::string h = "1";
};

RunOutput cmd_weyl(const WeylFlags& f, const Common& common) {
  nt::SequenceSpec spec{f.j, parse_beta(f.beta, common.precision), f.beta};
  const auto grid = parse_n_grid(f.n_grid);
  if (grid.back() > kMaxPoints) throw ResourceError("N above 2e7 terms");
  std::vector<std::int64_t> hs;
  for (const auto item : split(f.h, ',')) {
    const double v = parse_double(item);
    if (v < 1 || v != std::floor(v)) throw UsageError("--freq values must be positive integers");
    hs.push_back(static_cast<std::int64_t>(v));
  }
  ResultTable table({{"N", "count"}, {"h", "count"}, {"re", ""}, {"im", ""}, {"modulus", ""},
                     {"modulus_over_N", ""}});
  for (const auto n : grid) {
    for (const auto h : hs) {
      const auto s = nt::weyl_sum(spec, h, n);
      table.add_row({n, h, s.value.real(), s.value.imag(), s.modulus,
                     s.modulus / static_cast<double>(n)});
    }
  }
  RunOutput run;
  run.tables.emplace_back("weyl.csv", std::move(table));
  return run;
}

// ----------------------------------------------------------------------------
// spectrum

RunOutput cmd_spectrum(const SpectrumFlags& f, const Common& common) {
  const auto model = build_model(f, common.precision);
  const auto v = floquet::build_floquet(model.spec, model.ensemble, f.dim, model.convention);
  const auto weights_for = weight_ensemble(model);
  const auto d = floquet::eigen_decompose(v, weights_for);

  std::vector<Column> columns = {{"i", "index"}, {"eigenphase", "rad"}};
  for (std::size_t k = 0; k < d.weights.size(); ++k) columns.push_back({"weight_" + std::to_string(k + 1), ""});
  ResultTable phases(columns);
  for (std::size_t i = 0; i < d.eigenphases.size(); ++i) {
    std::vector<Cell> row = {static_cast<std::int64_t>(i), d.eigenphases[i]};
    for (const auto& w : d.weights) row.emplace_back(w[i]);
    phases.add_row(std::move(row));
  }

  RunOutput run;
  json summary;
  summary["dim"] = f.dim;
  summary["rank"] = model.ensemble.rank();
  summary["convention"] = f.convention;
  summary["unitarity_defect"] = v.unitarity_defect();
  summary["unitarity_tolerance"] = 1e-10 * static_cast<double>(f.dim);
  summary["modulus_defect"] = d.modulus_defect;
  summary["modulus_tolerance"] = 1e-10;
  summary["truncation_loss"] = v.truncation_loss;
  auto norms = json::array();
  for (std::size_t k = 0; k < model.ensemble.rank(); ++k) {
    const double lh = v.ensemble.strengths[k] / model.spec.hbar;
    norms.push_back({{"k", k + 1},
                     {"numerical", floquet::trace_norm(floquet::perturbation_term(v, k))},
                     {"formula", floquet::perturbation_trace_norm(lh)}});
  }
  summary["trace_norms"] = std::move(norms);

  if (model.ensemble.rank() == 1) {
    const auto residuals = floquet::secular_residuals(v, d);
    ResultTable table({{"i", "index"}, {"eigenphase", "rad"}, {"weight", ""}, {"residual", ""}});
    double worst = 0.0;
    std::int64_t skipped = 0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      if (!residuals[i]) {
        ++skipped;
        continue;
      }
      worst = std::max(worst, std::abs(*residuals[i]));
      table.add_row({static_cast<std::int64_t>(i), d.eigenphases[i], d.weights[0][i], *residuals[i]});
    }
    summary["max_abs_residual"] = worst;
    summary["residual_tolerance"] = kResidualTolerance;
    summary["residual_count"] = table.size();
    summary["orthogonal_eigenvectors_skipped"] = skipped;
    if (worst > kResidualTolerance) run.violations.push_back("secular residual above 1e-6");
    run.notes.push_back("max |cotangent residual| " + format_double(worst));
    run.tables.emplace_back("eigenphases.csv", std::move(phases));
    run.tables.emplace_back("residuals.csv", std::move(table));
  } else {
    run.tables.emplace_back("eigenphases.csv", std::move(phases));
  }
  run.notes.push_back("unitarity defect " + format_double(v.unitarity_defect()));
  run.documents.emplace_back("summary.json", std::move(summary));
  return run;
}

// ----------------------------------------------------------------------------
// scount

struct ScountFlags {
  int j = 1;
  std::string beta;
  std::string gamma = "0.75";
  std::string x_grid = "default";
  std::string n_grid = "1e3:1e6:4";
  std::string variant = "combescure";
  double delta = 0.01;
  std::optional<double> eta;
};

RunOutput cmd_scount(const ScountFlags& f, const Common& common) {
  nt::SequenceSpec spec{f.j, parse_beta(f.beta, common.precision), f.beta};
  if (f.j < 1) throw UsageError("--j must be >= 1");
  const auto gammas = parse_linear_grid(f.gamma);
  for (const double g : gammas) {
    if (!(g > 0.5 && g <= 1.0)) throw UsageError("gamma values must satisfy 1/2 < gamma <= 1");
  }
  const auto xs = parse_x_grid(f.x_grid);
  const auto grid = parse_n_grid(f.n_grid);
  if (grid.size() < 4) throw UsageError("--n-grid needs at least 4 sizes");
  if (grid.front() < 3) throw UsageError("--n-grid sizes must be >= 3");
  if (grid.back() > kMaxPoints) throw ResourceError("N above 2e7 points");
  if (!(f.delta > 0.0 && f.delta < 0.5)) throw UsageError("--delta must lie in (0, 1/2)");

  std::optional<double> eta = f.eta;
  std::string eta_source = eta ? "flag" : "none";
  if (eta && !(*eta >= 1.0)) throw UsageError("--eta must be >= 1");
  if (!eta && spec.beta.source_depth() > 0) {
    try {
      eta = nt::irrational_type_estimate(spec.beta, 1'000'000).eta_hat;
      eta_source = "estimate";
    } catch (const PrecisionError&) {
      eta_source = "none";
    }
  }

  experiments::SweepOptions options;
  options.threads = common.threads;
  options.inequality.variant =
      f.variant == "bourget" ? experiments::Variant::bourget : experiments::Variant::combescure;
  options.inequality.delta = f.delta;
  const auto result = eta ? experiments::gamma_sweep(spec, *eta, gammas, xs, grid, options)
                          : experiments::scan_grid(spec, gammas, xs, grid, options);

  ResultTable cells({{"gamma", ""}, {"x", "rad"}, {"N", "count"}, {"interval_fits", ""},
                     {"J_lo", "turns"}, {"J_hi", "turns"}, {"A", "count"}, {"S", "count"},
                     {"S_bourget", "count"}, {"lhs", "count"}, {"lhs_actual", "count"},
                     {"rhs", "count"}, {"inequality_holds", ""}, {"B_inverse", ""},
                     {"B_bound_combescure", ""}, {"B_bound_bourget", ""}, {"b_bounds_hold", ""}});
  std::int64_t checked = 0, violations = 0, unfit = 0, b_violations = 0;
  const bool enforce_lhs = options.inequality.variant == experiments::Variant::combescure;
  for (const auto& c : result.cells) {
    const bool holds = enforce_lhs ? c.inequality_holds() : c.actual_inequality_holds();
    if (c.interval_fits) {
      ++checked;
      if (!holds) ++violations;
    } else {
      ++unfit;
    }
    if (!c.b_bounds_hold()) ++b_violations;
    cells.add_row({c.gamma, c.x, c.n, c.interval_fits, c.interval.lo, c.interval.hi, c.a_count,
                   c.s_count, c.s_count_bourget, c.lhs, c.lhs_actual, c.rhs, holds, c.b_inverse,
                   c.b_bound_combescure, c.b_bound_bourget.value_or(std::nan("")), c.b_bounds_hold()});
  }

  json summary;
  summary["j"] = f.j;
  summary["beta"] = f.beta;
  summary["variant"] = f.variant;
  summary["delta"] = f.delta;
  summary["eta"] = eta ? json(*eta) : json(nullptr);
  summary["eta_source"] = eta_source;
  if (eta) {
    const auto w = spectral::gamma_window(f.j, *eta);
    summary["window"] = {{"lo", w.lo}, {"hi", w.hi}};
  } else {
    summary["window"] = nullptr;
  }
  auto per_gamma = json::array();
  for (std::size_t g = 0; g < result.gamma_grid.size(); ++g) {
    json entry;
    entry["gamma"] = result.gamma_grid[g];
    entry["inside_window"] = result.inside_window.empty() ? json(nullptr) : json(static_cast<bool>(result.inside_window[g]));
    auto labels = json::array();
    for (std::size_t xi = 0; xi < result.x_grid.size(); ++xi) {
      std::vector<std::int64_t> counts;
      for (std::size_t ni = 0; ni < result.n_grid.size(); ++ni) counts.push_back(result.cell(g, xi, ni).s_count);
      labels.push_back({{"x", result.x_grid[xi]},
                        {"label", experiments::to_string(result.label(g, xi))},
                        {"S_counts", counts}});
    }
    entry["labels"] = std::move(labels);
    per_gamma.push_back(std::move(entry));
  }
  summary["n_grid"] = result.n_grid;
  summary["gammas"] = std::move(per_gamma);
  summary["checks"] = {{"inequality_cells_checked", checked},
                       {"inequality_violations", violations},
                       {"intervals_not_fitting", unfit},
                       {"b_bound_violations", b_violations}};
  summary["tolerances"] = {{"inequality_slack_relative", 1e-9}, {"b_bound_slack_relative", 1e-12}};

  RunOutput run;
  if (violations > 0) run.violations.push_back(std::to_string(violations) + " cells violate the counting inequality");
  if (b_violations > 0) run.violations.push_back(std::to_string(b_violations) + " cells violate a B^{-1} bound");
  run.notes.push_back(std::to_string(result.cells.size()) + " cells, " + std::to_string(checked) +
                      " with a fitting interval");
  run.tables.emplace_back("cells.csv", std::move(cells));
  run.documents.emplace_back("summary.json", std::move(summary));
  return run;
}

// ----------------------------------------------------------------------------
// dynamics

struct DynamicsFlags {
  SpectrumFlags spectrum;
  std::int64_t kicks = 1000;
  std::size_t state = 1;
};

RunOutput cmd_dynamics(const DynamicsFlags& f, const Common& common) {
  if (f.kicks < 1) throw UsageError("--kicks must be >= 1");
  if (f.kicks > 10'000'000) throw ResourceError("more than 1e7 kicks");
  const auto model = build_model(f.spectrum, common.precision);
  const auto v = floquet::build_floquet(model.spec, model.ensemble, f.spectrum.dim, model.convention);
  const auto weights_for = weight_ensemble(model);
  if (f.state < 1 || f.state > weights_for.rank()) throw UsageError("--state out of range");
  const std::size_t k = f.state - 1;
  const auto d = floquet::eigen_decompose(v, weights_for);
  const auto trace = floquet::evolve(v, weights_for.states[k], model.spec, f.kicks);
  const auto w = floquet::wiener_average(trace, d, k);

  ResultTable table({{"n", "kicks"}, {"abs_c_sq", ""}, {"energy", "action/time"}, {"cesaro_mean", ""}});
  long double running = 0.0L;
  for (std::size_t n = 1; n < trace.survival.size(); ++n) {
    const double p = std::norm(trace.survival[n]);
    running += p;
    table.add_row({static_cast<std::int64_t>(n), p, trace.energy[n],
                   static_cast<double>(running / static_cast<long double>(n))});
  }

  json summary;
  summary["dim"] = f.spectrum.dim;
  summary["rank"] = model.ensemble.rank();
  summary["state"] = f.state;
  summary["horizon"] = w.horizon;
  summary["cesaro_mean"] = w.cesaro_mean;
  summary["point_mass_sum"] = w.point_mass_sum;
  summary["abs_difference"] = std::abs(w.cesaro_mean - w.point_mass_sum);
  summary["tolerance"] = kWienerTolerance;
  summary["within_tolerance"] = std::abs(w.cesaro_mean - w.point_mass_sum) <= kWienerTolerance;
  summary["spectral_route"] = trace.spectral_route;
  summary["c0"] = {trace.survival.front().real(), trace.survival.front().imag()};
  summary["energy_initial"] = trace.energy.front();
  summary["energy_final"] = trace.energy.back();
  summary["unitarity_defect"] = v.unitarity_defect();

  RunOutput run;
  run.notes.push_back("Cesaro mean " + format_double(w.cesaro_mean) + ", sum of squared weights " +
                      format_double(w.point_mass_sum));
  run.tables.emplace_back("dynamics.csv", std::move(table));
  run.documents.emplace_back("wiener.json", std::move(summary));
  return run;
}

// ----------------------------------------------------------------------------

int persist(const std::string& command, const CLI::App* sub, const Common& common,
            const std::function<RunOutput()>& compute, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.command = command;
  manifest.params = collect_params(sub);
  manifest.hash = params_hash(command, manifest.params);
  manifest.version = FLOQUETLAB_VERSION;
  const fs::path dir = common.out.empty()
                           ? fs::path("floquetlab-runs") / (command + "-" + manifest.hash.substr(0, 12))
                           : fs::path(common.out);

  if (!common.force) {
    if (const auto previous = read_manifest(dir); previous && previous->hash == manifest.hash) {
      const bool complete = std::all_of(previous->outputs.begin(), previous->outputs.end(),
                                        [&](const OutputFile& o) { return fs::exists(dir / o.file); });
      if (complete) {
        out << "cached run " << manifest.hash.substr(0, 12) << " in " << dir.string() << "\n";
        return kSuccess;
      }
    }
  }

  const RunOutput run = compute();
  fs::create_directories(dir);
  for (const auto& [name, table] : run.tables) {
    write_atomic(dir / name, table.to_csv());
    manifest.outputs.push_back({name, table.columns()});
  }
  for (const auto& [name, doc] : run.documents) {
    write_atomic(dir / name, doc.dump(2) + "\n");
    manifest.outputs.push_back({name, {}});
  }
  manifest.timestamp = utc_timestamp();
  write_atomic(dir / kManifestName, manifest.to_json().dump(2) + "\n");

  for (const auto& note : run.notes) out << note << "\n";
  out << "wrote " << dir.string() << "\n";
  for (const auto& v : run.violations) err << "tolerance violation: " << v << "\n";
  return run.violations.empty() ? kSuccess : kTolerance;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"floquetlab: discrepancy, Weyl sums and kicked Floquet spectra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FLOQUETLAB_VERSION);

  Common common;

  DiscrepancyFlags disc;
  auto* sub_disc = app.add_subcommand("discrepancy", "Exact D_N of (n^j beta) over a grid of N");
  sub_disc->add_option("--j", disc.j, "Power j")->capture_default_str()->check(CLI::Range(1, 64));
  sub_disc->add_option("--beta", disc.beta, "beta as decimal, p/q, golden, phi or sqrt2")->required();
  sub_disc->add_option("--n-grid", disc.n_grid, "first:last:count or a comma list")->capture_default_str();
  sub_disc->add_option("--m", disc.m, "Erdos-Turan cutoff")->capture_default_str()->check(CLI::Range(1, 100000));
  sub_disc->add_option("--eta", disc.eta, "Type used for the predicted slope")->capture_default_str();
  add_common(sub_disc, common);

  WeylFlags weyl;
  auto* sub_weyl = app.add_subcommand("weyl", "Weyl sums sum exp(2 pi i h n^j beta)");
  sub_weyl->add_option("--j", weyl.j, "Power j")->capture_default_str()->check(CLI::Range(1, 64));
  sub_weyl->add_option("--beta", weyl.beta, "beta as decimal, p/q, golden, phi or sqrt2")->required();
  sub_weyl->add_option("--n-grid", weyl.n_grid, "first:last:count or a comma list")->capture_default_str();
  sub_weyl->add_option("--freq", weyl.h, "Frequencies h, comma separated")->capture_default_str();
  add_common(sub_weyl, common);

  SpectrumFlags spec_flags;
  auto* sub_spec = app.add_subcommand("spectrum", "Eigenphases and weights of a truncated Floquet operator");
  add_spectrum_flags(sub_spec, spec_flags);
  add_common(sub_spec, common);

  ScountFlags scount;
  auto* sub_scount = app.add_subcommand("scount", "Counting sweep for S(x), J_N(x) and B^{-1} bounds");
  sub_scount->add_option("--j", scount.j, "Power j")->capture_default_str()->check(CLI::Range(1, 64));
  sub_scount->add_option("--beta", scount.beta, "beta as decimal, p/q, golden, phi or sqrt2")->required();
  sub_scount->add_option("--gamma", scount.gamma, "gamma list or lo:hi:count")->capture_default_str();
  sub_scount->add_option("--x-grid", scount.x_grid, "default, default:M, or a list of angles")
      ->capture_default_str();
  sub_scount->add_option("--n-grid", scount.n_grid, "first:last:count or a comma list")->capture_default_str();
  sub_scount->add_option("--variant", scount.variant, "Interval variant")
      ->capture_default_str()
      ->check(CLI::IsMember({"combescure", "bourget"}));
  sub_scount->add_option("--delta", scount.delta, "Bourget delta")->capture_default_str();
  sub_scount->add_option("--eta", scount.eta, "Type of beta for the gamma window (default: estimate)");
  add_common(sub_scount, common);

  DynamicsFlags dyn;
  auto* sub_dyn = app.add_subcommand("dynamics", "Survival amplitudes, energy and the Wiener average");
  add_spectrum_flags(sub_dyn, dyn.spectrum);
  sub_dyn->add_option("--kicks", dyn.kicks, "Number of kicks")->capture_default_str();
  sub_dyn->add_option("--state", dyn.state, "Kick state to follow (1-based)")->capture_default_str();
  add_common(sub_dyn, common);

  app.failure_message(CLI::FailureMessage::help);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (sub_disc->parsed()) {
      return persist("discrepancy", sub_disc, common, [&] { return cmd_discrepancy(disc, common); }, out, err);
    }
    if (sub_weyl->parsed()) {
      return persist("weyl", sub_weyl, common, [&] { return cmd_weyl(weyl, common); }, out, err);
    }
    if (sub_spec->parsed()) {
      return persist("spectrum", sub_spec, common, [&] { return cmd_spectrum(spec_flags, common); }, out, err);
    }
    if (sub_scount->parsed()) {
      return persist("scount", sub_scount, common, [&] { return cmd_scount(scount, common); }, out, err);
    }
    if (sub_dyn->parsed()) {
      return persist("dynamics", sub_dyn, common, [&] { return cmd_dynamics(dyn, common); }, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const ToleranceError& e) {
    err << "tolerance violation: " << e.what() << "\n";
    return kTolerance;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const SizeError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PrecisionError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace floquetlab::cli
