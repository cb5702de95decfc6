#include "scatlab/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <iomanip>
#include <sstream>

#include "scatlab/errors.hpp"
#include "scatlab/fft.hpp"
#include "scatlab/taylor.hpp"

namespace scatlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config parsing and validation.

namespace {

void reject_unknown_keys(const json& obj, const char* block,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw ConfigError("config: unknown key '" + key + "' in " + block);
  }
}

double require_positive(const json& obj, const char* block, const char* key) {
  if (!obj.contains(key))
    throw ConfigError(std::string("config: missing ") + block + "." + key);
  const double v = obj.at(key).get<double>();
  if (!(v > 0.0))
    throw ConfigError(std::string("config: ") + block + "." + key +
                      " must be positive");
  return v;
}

double get_or(const json& obj, const char* key, double fallback) {
  return obj.contains(key) ? obj.at(key).get<double>() : fallback;
}

ComplexField build_profile(const json& block, const std::string& equation,
                           const PropagatorSpec& prop, uint64_t default_seed,
                           const char* block_name) {
  reject_unknown_keys(block, block_name,
                      {"profile", "amplitude", "width", "wavenumber", "seed",
                       "normalize_d"});
  const std::string profile =
      block.contains("profile") ? block.at("profile").get<std::string>()
                                : std::string("gaussian");
  if (profile != "gaussian" && profile != "packet" &&
      profile != "random-seeded")
    throw ConfigError("config: unknown data profile '" + profile + "'");
  if (!block.contains("amplitude"))
    throw ConfigError(std::string("config: missing ") + block_name +
                      ".amplitude");
  const double amplitude = block.at("amplitude").get<double>();
  if (!(amplitude >= 0.0))
    throw ConfigError(std::string("config: ") + block_name +
                      ".amplitude must be non-negative");
  const double width = get_or(block, "width", 1.0);
  const double wavenumber = get_or(block, "wavenumber", 1.0);
  const uint64_t seed = block.contains("seed")
                            ? block.at("seed").get<uint64_t>()
                            : default_seed;
  if (!(width > 0.0))
    throw ConfigError(std::string("config: ") + block_name +
                      ".width must be positive");

  ComplexField f;
  if (equation == "toy" || equation == "toy-hartree") {
    if (profile == "random-seeded") {
      Rng rng(seed);
      f = random_toy_field(prop.grid, rng, amplitude);
    } else {
      f = toy_profile(prop.grid, amplitude);
    }
  } else if (equation == "kg") {
    if (profile == "random-seeded") {
      Rng rng(seed);
      f = random_pair_field(prop.grid, rng, amplitude);
    } else {
      f = gaussian_pair_profile(prop.grid, amplitude, width);
      if (profile == "packet") {
        const auto& x = prop.grid->coords();
        for (int j = 0; j < prop.grid->size(); ++j)
          f.component(0)[j] *= std::cos(wavenumber * x[j]);
      }
    }
  } else {  // nls
    if (profile == "random-seeded") {
      Rng rng(seed);
      f = random_h1_field(prop.grid, rng, amplitude);
    } else if (profile == "packet") {
      f = packet_profile(prop.grid, amplitude, width, wavenumber);
    } else {
      f = gaussian_profile(prop.grid, amplitude, width);
    }
  }
  if (block.contains("normalize_d")) {
    const double target = block.at("normalize_d").get<double>();
    if (!(target >= 0.0))
      throw ConfigError("config: normalize_d must be non-negative");
    const double current = d_norm(f);
    if (current > 0.0) f *= Complex(target / current, 0.0);
  }
  return f;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const json& j) {
  ExperimentConfig c;
  reject_unknown_keys(
      j, "config",
      {"equation", "p", "lambda", "kg_mass", "grid", "horizon", "data",
       "perturbation", "series", "strichartz", "probes", "thresholds",
       "born_substeps", "output_dir"});
  for (const char* key : {"equation", "p", "lambda", "grid", "horizon", "data"})
    if (!j.contains(key))
      throw ConfigError(std::string("config: missing required key '") + key +
                        "'");

  c.equation = j.at("equation").get<std::string>();
  if (c.equation != "nls" && c.equation != "kg" && c.equation != "toy" &&
      c.equation != "toy-hartree")
    throw ConfigError("config: equation must be nls, kg, toy or toy-hartree");

  const int p = j.at("p").get<int>();
  if (p < 3 || p % 2 == 0)
    throw ConfigError("config: p must be an odd integer >= 3");
  const double lambda = j.at("lambda").get<double>();

  const json& grid = j.at("grid");
  const bool is_toy = c.equation == "toy" || c.equation == "toy-hartree";
  if (is_toy) {
    reject_unknown_keys(grid, "grid", {"d", "frequencies"});
    if (!grid.contains("d")) throw ConfigError("config: toy grid needs d");
    const int d = grid.at("d").get<int>();
    std::vector<double> freqs;
    if (grid.contains("frequencies"))
      freqs = grid.at("frequencies").get<std::vector<double>>();
    c.prop = PropagatorSpec::toy(SpatialGrid::toy(d), std::move(freqs));
  } else {
    reject_unknown_keys(grid, "grid", {"L", "N"});
    const double L = require_positive(grid, "grid", "L");
    if (!grid.contains("N")) throw ConfigError("config: grid needs N");
    const int N = grid.at("N").get<int>();
    auto spatial = SpatialGrid::periodic(L, N);
    if (c.equation == "kg") {
      const double mass = j.contains("kg_mass")
                              ? j.at("kg_mass").get<double>()
                              : 1.0;
      if (mass < 0.0) throw ConfigError("config: kg_mass must be >= 0");
      c.prop = PropagatorSpec::klein_gordon(spatial, mass);
    } else {
      c.prop = PropagatorSpec::schrodinger(spatial);
    }
  }

  if (c.equation == "nls") {
    c.nl = NonlinearitySpec::gauge_power(p, lambda);
  } else if (c.equation == "kg") {
    c.nl = NonlinearitySpec::real_odd_power(p, lambda);
  } else if (c.equation == "toy") {
    c.nl = NonlinearitySpec::toy_gauge_power(p, lambda);
  } else {
    if (p != 3)
      throw ConfigError("config: toy-hartree is cubic; p must be 3");
    c.nl = NonlinearitySpec::toy_convolution_cubic(lambda, c.prop.grid->size());
  }

  int q_toy = 1;
  if (j.contains("strichartz")) {
    reject_unknown_keys(j.at("strichartz"), "strichartz", {"q_toy"});
    q_toy = j.at("strichartz").value("q_toy", 1);
  }
  if (is_toy) {
    c.exps = StrichartzExponents::toy(p, q_toy, c.nl.coupling);
  } else {
    if (p < 5)
      throw ConfigError(
          "config: nls/kg experiments need p >= 5 for admissible exponents");
    c.exps = StrichartzExponents::for_nls(p);
  }

  const json& horizon = j.at("horizon");
  reject_unknown_keys(horizon, "horizon",
                      {"T", "dt", "scheme", "snapshot_stride",
                       "conservation_check_every"});
  c.integrator.T = require_positive(horizon, "horizon", "T");
  c.integrator.dt = require_positive(horizon, "horizon", "dt");
  c.integrator.snapshot_stride = horizon.value("snapshot_stride", 1);
  c.integrator.conservation_check_every =
      horizon.value("conservation_check_every", 100);
  std::string scheme = horizon.value(
      "scheme", c.equation == "nls" ? "strang" : "lawson");
  if (scheme == "strang")
    c.integrator.scheme = Scheme::StrangSplit;
  else if (scheme == "lawson")
    c.integrator.scheme = Scheme::LawsonRK4;
  else
    throw ConfigError("config: scheme must be strang or lawson");
  c.integrator.validate();

  if (j.contains("thresholds")) {
    const json& thr = j.at("thresholds");
    reject_unknown_keys(thr, "thresholds",
                        {"tail", "boundary_mass", "noise_floor",
                         "omega_defect"});
    c.thresholds.tail = thr.value("tail", 1e-4);
    c.thresholds.boundary_mass = thr.value("boundary_mass", 1e-6);
    c.thresholds.noise_floor = thr.value("noise_floor", 1e-12);
    c.omega_defect_threshold = thr.value("omega_defect", 1e-5);
  }

  c.data_seed = j.at("data").contains("seed")
                    ? j.at("data").at("seed").get<uint64_t>()
                    : 42;
  c.data = build_profile(j.at("data"), c.equation, c.prop, c.data_seed, "data");

  if (j.contains("perturbation")) {
    c.perturbation = build_profile(j.at("perturbation"), c.equation, c.prop,
                                   c.data_seed + 1, "perturbation");
  } else {
    json def = {{"profile", "random-seeded"},
                {"amplitude", 1.0},
                {"seed", c.data_seed + 1}};
    c.perturbation = build_profile(def, c.equation, c.prop, c.data_seed + 1,
                                   "perturbation");
  }

  c.series_K = is_toy ? 6 : 4;
  if (j.contains("series")) {
    const json& series = j.at("series");
    reject_unknown_keys(series, "series", {"K", "epsilon_list", "stencil_h"});
    c.series_K = series.value("K", c.series_K);
    if (c.series_K < 0) throw ConfigError("config: series.K must be >= 0");
    if (series.contains("epsilon_list")) {
      c.epsilon_list = series.at("epsilon_list").get<std::vector<double>>();
      for (double e : c.epsilon_list)
        if (!(e > 0.0))
          throw ConfigError("config: epsilon_list entries must be positive");
    }
    c.stencil_h = series.value("stencil_h", 1e-2);
  }
  if (c.epsilon_list.empty()) {
    for (double e = 1e-2; e > 1e-3 * (1.0 - 1e-9); e /= std::sqrt(2.0))
      c.epsilon_list.push_back(e);
  }

  c.probe_seed = c.data_seed + 101;
  if (j.contains("probes")) {
    const json& probes = j.at("probes");
    reject_unknown_keys(probes, "probes", {"count", "seed"});
    c.probe_count = probes.value("count", 32);
    if (c.probe_count < 1) throw ConfigError("config: probes.count must be >= 1");
    if (probes.contains("seed"))
      c.probe_seed = probes.at("seed").get<uint64_t>();
  }

  c.born_substeps = j.value("born_substeps", 1);
  if (c.born_substeps < 1)
    throw ConfigError("config: born_substeps must be >= 1");
  if (j.contains("output_dir"))
    c.output_dir = j.at("output_dir").get<std::string>();

  c.raw = j;
  return c;
}

ExperimentConfig ExperimentConfig::parse_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  return parse(j);
}

// ---------------------------------------------------------------------------
// Output helpers.

namespace {
// The hash identifies the experiment physics; where results land is not
// part of the identity.
std::string canonical_dump(const nlohmann::json& config) {
  nlohmann::json stripped = config;
  stripped.erase("output_dir");
  return stripped.dump();
}
}  // namespace

uint64_t fnv1a_hash(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

void write_table(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_table: cannot open " + path.string());
  for (const auto& line : table.metadata) out << "# " << line << "\n";
  for (size_t i = 0; i < table.columns.size(); ++i)
    out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "");
  out << "\n";
  out << std::setprecision(17);
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_table: cannot open " + path.string());
  Table table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string meta = line.substr(1);
      if (!meta.empty() && meta[0] == ' ') meta = meta.substr(1);
      table.metadata.push_back(meta);
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!header_seen) {
      while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      // strtod instead of stod: subnormal values must parse, not throw.
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw std::runtime_error("read_table: bad number '" + cell + "'");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void apply_override(json& config, const std::string& key,
                    const std::string& value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;  // plain string
  }
  json* node = &config;
  size_t pos = 0;
  while (true) {
    const size_t dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot - pos);
    if (part.empty()) throw ConfigError("override: empty key segment");
    if (dot == std::string::npos) {
      (*node)[part] = parsed;
      break;
    }
    node = &(*node)[part];
    pos = dot + 1;
  }
}

// ---------------------------------------------------------------------------
// Recipes.

namespace {

struct RecipeContext {
  const ExperimentConfig& config;
  json metrics;
  std::vector<ExperimentCheck> checks;
  std::vector<std::string> log_lines;
  std::vector<std::string> table_metadata;

  explicit RecipeContext(const ExperimentConfig& c) : config(c) {
    std::ostringstream hash;
    hash << "0x" << std::hex << fnv1a_hash(canonical_dump(c.raw));
    table_metadata = {
        "config_hash=" + hash.str(),
        "seed=" + std::to_string(c.data_seed),
        std::string("scatlab_version=") + kVersion + " prng=" + Rng::algorithm,
    };
  }

  void check(const std::string& name, bool pass, double value,
             double threshold, const std::string& cmp) {
    checks.push_back({name, pass, value, threshold, cmp});
    std::ostringstream line;
    line << (pass ? "[pass] " : "[FAIL] ") << name << ": value " << value
         << " (" << cmp << " " << threshold << ")";
    log_lines.push_back(line.str());
  }

  void note(const std::string& line) { log_lines.push_back(line); }

  void save_table(const std::string& filename, Table table) const {
    table.metadata = table_metadata;
    write_table(config.output_dir / filename, std::move(table));
  }
};

double drift_of(const std::vector<double>& samples) {
  if (samples.empty() || !std::isfinite(samples.front())) return 0.0;
  double drift = 0.0;
  for (double s : samples)
    drift = std::max(drift, std::abs(s / samples.front() - 1.0));
  return drift;
}

void run_scatter_recipe(RecipeContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  ConservationLog log;
  const ScatteringResult res = scatter(c.prop, c.nl, c.integrator, c.data,
                                       c.exps, c.thresholds, &log);
  ctx.metrics["converged"] = res.converged;
  ctx.metrics["boundary_mass_max"] = res.boundary_mass_max;
  ctx.metrics["u_plus_d_norm"] = d_norm(res.u_plus);
  ctx.metrics["u_plus_l2"] = l2_norm(res.u_plus);
  ctx.metrics["u_at_zero_d_norm"] = d_norm(res.u_at_zero);
  ctx.metrics["f1_norm"] = res.norm_table.f1_norm;
  ctx.metrics["f2_norm"] = res.norm_table.f2_norm;
  ctx.metrics["f_norm"] = res.norm_table.f_norm;
  double accumulated = 0.0;
  Table tail{{}, {"t", "tail"}, {}};
  for (const auto& [t, s] : res.cauchy_tail) {
    tail.rows.push_back({t, s});
    accumulated += s;
  }
  ctx.metrics["final_tail"] =
      res.cauchy_tail.empty() ? 0.0 : res.cauchy_tail.back().second;
  ctx.metrics["accumulated_tail"] = accumulated;
  ctx.save_table("tail.csv", std::move(tail));

  Table cons{{}, {"t", "mass", "energy"}, {}};
  for (size_t i = 0; i < log.times.size(); ++i)
    cons.rows.push_back({log.times[i], log.mass[i], log.energy[i]});
  ctx.save_table("conservation.csv", std::move(cons));
  const double mass_drift = drift_of(log.mass);
  const double energy_drift = drift_of(log.energy);
  ctx.metrics["mass_drift"] = mass_drift;
  ctx.metrics["energy_drift"] = energy_drift;

  if (c.nl.lambda == 0.0) {
    ComplexField diff = res.u_plus;
    diff -= c.data;
    const double rel = d_norm(diff) / std::max(d_norm(c.data), 1e-300);
    ctx.check("lambda_zero_identity", rel <= 1e-10, rel, 1e-10, "<=");
  } else {
    ctx.check("converged", res.converged, res.converged ? 1.0 : 0.0, 1.0,
              "==");
    ctx.check("boundary_mass", res.boundary_mass_max <= c.thresholds.boundary_mass,
              res.boundary_mass_max, c.thresholds.boundary_mass, "<=");
  }
}

void run_hierarchy_recipe(RecipeContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const ScatteringResult bg =
      scatter(c.prop, c.nl, c.integrator, c.data, c.exps, c.thresholds);
  if (!bg.converged)
    throw InconclusiveError("hierarchy: background scatter did not converge");
  const SeriesResult series =
      build_series(c.prop, c.nl, bg, c.perturbation, c.series_K, c.exps);

  Table wk{{}, {"k", "f_norm", "w_plus_d_norm"}, {}};
  for (int k = 0; k <= c.series_K; ++k)
    wk.rows.push_back({static_cast<double>(k), series.f_norms_of_wk[k],
                       d_norm(series.w_plus[k])});
  ctx.save_table("wk_norms.csv", std::move(wk));
  ctx.metrics["growth_lambda"] = series.growth_lambda;
  ctx.metrics["radius_estimate"] = series.radius_estimate;
  ctx.metrics["envelope_max_residual"] = series.envelope_max_residual;

  if (c.data.zero()) {
    // Expansion around zero: only w_{k(p-1)} survive.
    double sparse_max = 0.0;
    for (int k = 1; k <= c.series_K; ++k)
      if (k % (c.nl.p - 1) != 0)
        sparse_max = std::max(sparse_max, series.f_norms_of_wk[k]);
    const double bound = 1e-12 * series.f_norms_of_wk[0];
    ctx.check("case1_sparsity", sparse_max <= bound, sparse_max, bound, "<=");
  } else {
    int nonzero = 0;
    for (int k = 1; k <= c.series_K; ++k)
      if (series.f_norms_of_wk[k] > 0.0) ++nonzero;
    if (nonzero >= 3)
      ctx.check("envelope_max_residual",
                series.envelope_max_residual <= 0.5,
                series.envelope_max_residual, 0.5, "<=");
  }
}

void run_remainder_recipe(RecipeContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const ScatteringResult bg =
      scatter(c.prop, c.nl, c.integrator, c.data, c.exps, c.thresholds);
  if (!bg.converged)
    throw InconclusiveError("remainder-order: background did not converge");
  const SeriesResult series =
      build_series(c.prop, c.nl, bg, c.perturbation, c.series_K, c.exps);

  Table table{{}, {"epsilon"}, {}};
  std::vector<std::vector<double>> per_K;
  json slopes = json::object();
  for (int K = 0; K <= c.series_K; ++K) {
    const RemainderFit fit =
        remainder_order(c.prop, c.nl, c.integrator, bg, series, c.perturbation,
                        K, c.epsilon_list, c.exps, c.thresholds);
    if (fit.status == RemainderFit::Status::TriviallyZero) {
      ctx.note("remainder-order: trivially zero (lambda = 0)");
      ctx.metrics["trivially_zero"] = true;
      return;
    }
    table.columns.push_back("remainder_K" + std::to_string(K));
    std::vector<double> col;
    for (const auto& [eps, r] : fit.samples) col.push_back(r);
    per_K.push_back(std::move(col));
    slopes["K" + std::to_string(K)] = fit.slope;
    const double target = K + 2.0;
    ctx.check("remainder_slope_K" + std::to_string(K),
              std::abs(fit.slope - target) <= 0.3, fit.slope, target,
              "within 0.3 of");
  }
  for (size_t i = 0; i < c.epsilon_list.size(); ++i) {
    std::vector<double> row = {c.epsilon_list[i]};
    for (const auto& col : per_K) row.push_back(col[i]);
    table.rows.push_back(std::move(row));
  }
  ctx.save_table("remainder.csv", std::move(table));
  ctx.metrics["slopes"] = slopes;
}

void run_omega_recipe(RecipeContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  auto probe = [&](uint64_t seed) {
    Rng rng(seed);
    if (c.prop.grid->kind() == GridKind::ToyVector)
      return random_toy_field(c.prop.grid, rng, 1.0);
    if (c.prop.components() == 2)
      return random_pair_field(c.prop.grid, rng, 1.0);
    return random_h1_field(c.prop.grid, rng, 1.0);
  };
  const ComplexField va = probe(c.probe_seed);
  const ComplexField vb = probe(c.probe_seed + 1);

  auto defect_at = [&](const IntegratorConfig& cfg) {
    const ScatteringResult bg =
        scatter(c.prop, c.nl, cfg, c.data, c.exps, c.thresholds);
    if (!bg.converged)
      throw InconclusiveError("omega-invariance: background did not converge");
    return omega_invariance(c.prop, c.nl, bg, va, vb);
  };

  const OmegaReport coarse = defect_at(c.integrator);
  IntegratorConfig half = c.integrator;
  half.dt *= 0.5;
  const OmegaReport fine = defect_at(half);

  ctx.metrics["value_minus"] = coarse.value_minus;
  ctx.metrics["value_plus"] = coarse.value_plus;
  ctx.metrics["relative_defect"] = coarse.relative_defect;
  ctx.metrics["relative_defect_half_dt"] = fine.relative_defect;
  const double ratio = fine.relative_defect > 0.0
                           ? coarse.relative_defect / fine.relative_defect
                           : std::numeric_limits<double>::infinity();
  ctx.metrics["defect_decrease_ratio"] = ratio;
  if (coarse.relative_defect < 1e-12 && fine.relative_defect < 1e-12)
    ctx.note(
        "both defects sit near the round-off floor; increase "
        "horizon.snapshot_stride to put the dt-scaling in the resolvable "
        "regime");

  Table table;
  table.columns = {"dt", "relative_defect"};
  table.rows = {{c.integrator.dt, coarse.relative_defect},
                {half.dt, fine.relative_defect}};
  ctx.save_table("omega.csv", std::move(table));

  ctx.check("relative_defect",
            coarse.relative_defect <= c.omega_defect_threshold,
            coarse.relative_defect, c.omega_defect_threshold, "<=");
  ctx.check("defect_decrease_ratio", ratio >= 4.0, ratio, 4.0, ">=");
}

void run_inverse_recipe(RecipeContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const bool is_toy = c.prop.grid->kind() == GridKind::ToyVector;
  ComplexField phi0 = c.perturbation;
  const InverseScatteringReport rep =
      estimate_power(c.prop, c.nl, c.integrator, phi0, c.epsilon_list, c.exps,
                     c.thresholds, c.born_substeps);

  Table table{{}, {"epsilon", "residual"}, {}};
  const bool has_h1 = !rep.residual_norms_h1.empty();
  if (has_h1) table.columns.push_back("residual_h1");
  for (size_t i = 0; i < rep.eps_list.size(); ++i) {
    std::vector<double> row = {rep.eps_list[i], rep.residual_norms[i]};
    if (has_h1) row.push_back(rep.residual_norms_h1[i]);
    table.rows.push_back(std::move(row));
  }
  ctx.save_table("residuals.csv", std::move(table));

  ctx.metrics["p_hat_defined"] = rep.p_hat_defined;
  if (c.nl.lambda == 0.0) {
    ctx.check("p_hat_undefined_at_lambda_zero", !rep.p_hat_defined,
              rep.p_hat_defined ? 1.0 : 0.0, 0.0, "==");
    return;
  }
  if (!rep.p_hat_defined)
    throw InconclusiveError("inverse-scattering: residuals below noise floor");
  ctx.metrics["p_hat"] = rep.p_hat;
  if (has_h1) ctx.metrics["p_hat_h1"] = rep.p_hat_h1;
  ctx.metrics["born_residual_slope"] = rep.born_residual_slope;

  const double p_tol = is_toy ? 0.1 : 0.2;
  ctx.check("p_hat", std::abs(rep.p_hat - c.nl.p) <= p_tol, rep.p_hat,
            static_cast<double>(c.nl.p), "within " + std::to_string(p_tol));
  const double born_min = is_toy ? 8.5 : 6.5;
  if (rep.born_slope_defined)
    ctx.check("born_residual_slope", rep.born_residual_slope >= born_min,
              rep.born_residual_slope, born_min, ">=");
  else
    ctx.check("born_residual_slope_defined", false, 0.0, 1.0, "==");
  if (is_toy) {
    const double lam = estimate_lambda(rep);
    ctx.metrics["lambda_hat"] = lam;
    const double rel = std::abs(lam - c.nl.lambda) /
                       std::max(std::abs(c.nl.lambda), 1e-300);
    ctx.check("lambda_hat", rel <= 0.02, lam, c.nl.lambda, "within 2% of");
  }
}

void run_norm_audit_recipe(RecipeContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const LinearBoundAudit coarse = measure_linear_bound(
      c.prop, c.exps, c.integrator, c.probe_count, c.probe_seed);
  IntegratorConfig half = c.integrator;
  half.dt *= 0.5;
  const LinearBoundAudit fine = measure_linear_bound(
      c.prop, c.exps, half, c.probe_count, c.probe_seed);
  ctx.metrics["c0"] = coarse.c0;
  ctx.metrics["c0_half_dt"] = fine.c0;
  const double stability = std::abs(coarse.c0 / fine.c0 - 1.0);
  ctx.metrics["c0_stability"] = stability;
  if (c.prop.kind == PropagatorKind::SchrodingerFree) {
    // J-augmented variant of the same bound.
    const LinearBoundAudit sigma = measure_linear_bound(
        c.prop, c.exps, c.integrator, c.probe_count, c.probe_seed,
        /*with_J=*/true);
    ctx.metrics["c0_sigma"] = sigma.c0;
  }

  Table table{{}, {"probe", "ratio", "ratio_half_dt"}, {}};
  for (size_t i = 0; i < coarse.ratios.size(); ++i)
    table.rows.push_back(
        {static_cast<double>(i), coarse.ratios[i], fine.ratios[i]});
  ctx.save_table("c0_samples.csv", std::move(table));

  // Spectral sanity on seeded fields: round trip and Parseval agreement.
  double roundtrip_max = 0.0, parseval_max = 0.0, unitarity_max = 0.0;
  Rng rng(c.probe_seed + 7);
  if (c.prop.grid->kind() == GridKind::Periodic1D) {
    const int n = c.prop.grid->size();
    for (int k = 0; k < 8; ++k) {
      ComplexField f = random_h1_field(c.prop.grid, rng, 1.0);
      ComplexField g = f;
      spectral::forward_inplace(n, g.values().data());
      double freq = 0.0;
      for (const Complex& v : g.values()) freq += std::norm(v);
      freq = std::sqrt(c.prop.grid->dx() / n * freq);
      parseval_max = std::max(
          parseval_max, std::abs(freq / l2_norm(f) - 1.0));
      spectral::inverse_inplace(n, g.values().data());
      g -= f;
      roundtrip_max =
          std::max(roundtrip_max, l2_norm(g) / std::max(l2_norm(f), 1e-300));
      if (c.prop.components() == 1) {
        const ComplexField moved = apply_U(c.prop, 1.7, f);
        unitarity_max = std::max(unitarity_max,
                                 std::abs(l2_norm(moved) / l2_norm(f) - 1.0));
      }
    }
    ctx.metrics["parseval_agreement"] = parseval_max;
    ctx.metrics["roundtrip_residual"] = roundtrip_max;
    ctx.metrics["unitarity_defect"] = unitarity_max;
    ctx.check("roundtrip_residual", roundtrip_max <= 1e-12, roundtrip_max,
              1e-12, "<=");
    ctx.check("parseval_agreement", parseval_max <= 1e-10, parseval_max,
              1e-10, "<=");
    if (c.prop.components() == 1)
      ctx.check("unitarity_defect", unitarity_max <= 1e-12, unitarity_max,
                1e-12, "<=");
  }
  ctx.check("c0_stability", stability <= 0.05, stability, 0.05, "<=");
}

void run_partition_recipe(RecipeContext& ctx) {
  const ExperimentConfig& c = ctx.config;
  const bool is_toy = c.prop.grid->kind() == GridKind::ToyVector;

  auto background_at = [&](const ComplexField& data, double T) {
    IntegratorConfig cfg = c.integrator;
    cfg.T = T;
    const ScatteringResult bg =
        scatter(c.prop, c.nl, cfg, data, c.exps, c.thresholds);
    if (!bg.converged)
      throw InconclusiveError("partition-diagnostic: background not converged");
    return bg;
  };

  const ScatteringResult bg = background_at(c.data, c.integrator.T);
  const double c_emp = measure_h2_constant(c.prop, c.nl, bg.trajectory, c.exps,
                                           c.probe_count, c.probe_seed);
  ctx.metrics["c_emp"] = c_emp;
  const auto intervals = partition_intervals(bg.trajectory, c.exps, c_emp);
  ctx.metrics["K"] = intervals.size();

  Table table{{}, {"k", "t_a", "t_b"}, {}};
  for (size_t k = 0; k < intervals.size(); ++k)
    table.rows.push_back(
        {static_cast<double>(k), intervals[k].a, intervals[k].b});
  ctx.save_table("intervals.csv", std::move(table));

  // Data scaled by 1/2 with the same measured constant.
  ComplexField half_data = c.data;
  half_data *= Complex(0.5, 0.0);
  const ScatteringResult bg_half = background_at(half_data, c.integrator.T);
  const auto intervals_half =
      partition_intervals(bg_half.trajectory, c.exps, c_emp);
  ctx.metrics["K_half_data"] = intervals_half.size();
  ctx.check("K_scaling_monotone", intervals_half.size() <= intervals.size(),
            static_cast<double>(intervals_half.size()),
            static_cast<double>(intervals.size()), "<=");

  if (is_toy) {
    json sweep = json::object();
    std::vector<size_t> ks;
    for (double T : {c.integrator.T / 4.0, c.integrator.T / 2.0,
                     c.integrator.T}) {
      const ScatteringResult bgs = background_at(c.data, T);
      const auto parts = partition_intervals(bgs.trajectory, c.exps, c_emp);
      sweep["T" + std::to_string(static_cast<int>(T))] = parts.size();
      ks.push_back(parts.size());
    }
    ctx.metrics["K_sweep"] = sweep;
    // Bounded-in-T behavior: the count settles as the horizon grows.
    ctx.check("K_sweep_stable", ks[2] <= ks[1] + 1 && ks[1] <= ks[0] + 2,
              static_cast<double>(ks[2]), static_cast<double>(ks[1] + 1),
              "<=");
  }
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& experiment_recipes() {
  static const std::vector<std::pair<std::string, std::string>> recipes = {
      {"scatter",
       "asymptotic-state run: wave/scattering map, Cauchy tails, "
       "conservation drifts (evolve + scattering modules)"},
      {"hierarchy",
       "recursive coefficient construction w_k with growth-envelope fit "
       "(taylor module)"},
      {"remainder-order",
       "series truncation order: fitted remainder slopes vs K+2 (taylor "
       "module)"},
      {"omega-invariance",
       "skew-form invariance under the linearized map, with dt refinement "
       "(consequences module)"},
      {"inverse-scattering",
       "power and coupling recovery from weak-field residuals "
       "(consequences module)"},
      {"norm-audit",
       "space-time norm bound of the free flow, spectral sanity "
       "(state-core + propagator modules)"},
      {"partition-diagnostic",
       "contraction-interval decomposition with empirical constants "
       "(scattering module)"},
  };
  return recipes;
}

ExperimentOutcome run_experiment(const std::string& name,
                                 const ExperimentConfig& config) {
  bool known = false;
  for (const auto& [rname, desc] : experiment_recipes())
    if (rname == name) known = true;
  if (!known) throw ConfigError("unknown experiment '" + name + "'");

  std::filesystem::create_directories(config.output_dir);
  RecipeContext ctx(config);
  ExperimentOutcome outcome;
  std::string status = "ok";
  std::string taint_message;

  try {
    if (name == "scatter")
      run_scatter_recipe(ctx);
    else if (name == "hierarchy")
      run_hierarchy_recipe(ctx);
    else if (name == "remainder-order")
      run_remainder_recipe(ctx);
    else if (name == "omega-invariance")
      run_omega_recipe(ctx);
    else if (name == "inverse-scattering")
      run_inverse_recipe(ctx);
    else if (name == "norm-audit")
      run_norm_audit_recipe(ctx);
    else if (name == "partition-diagnostic")
      run_partition_recipe(ctx);
  } catch (const TaintedResultError& e) {
    status = "tainted";
    taint_message = e.what();
  } catch (const DivergedError& e) {
    status = "tainted";
    taint_message = e.what();
  } catch (const PartitionInfeasibleError& e) {
    status = "tainted";
    taint_message = e.what();
  } catch (const InconclusiveError& e) {
    status = "tainted";
    taint_message = e.what();
  }

  bool all_pass = true;
  json checks = json::array();
  for (const auto& chk : ctx.checks) {
    all_pass = all_pass && chk.pass;
    checks.push_back({{"name", chk.name},
                      {"pass", chk.pass},
                      {"value", chk.value},
                      {"threshold", chk.threshold},
                      {"comparison", chk.comparison}});
  }
  if (status == "ok" && !all_pass) status = "failed-checks";

  std::ostringstream hash;
  hash << "0x" << std::hex << fnv1a_hash(canonical_dump(config.raw));
  outcome.summary = {{"experiment", name},
                     {"scatlab_version", kVersion},
                     {"prng", Rng::algorithm},
                     {"config_hash", hash.str()},
                     {"seed", config.data_seed},
                     {"status", status},
                     {"metrics", ctx.metrics},
                     {"checks", checks},
                     {"config", config.raw}};
  if (!taint_message.empty()) outcome.summary["taint"] = taint_message;

  {
    std::ofstream out(config.output_dir / "summary.json");
    out << outcome.summary.dump(2) << "\n";
  }
  {
    std::ofstream log(config.output_dir / "log.txt");
    log << "experiment: " << name << "\nstatus: " << status << "\n";
    if (!taint_message.empty()) log << "taint: " << taint_message << "\n";
    for (const auto& line : ctx.log_lines) log << line << "\n";
  }

  if (status == "tainted")
    outcome.exit_code = 3;
  else if (!all_pass)
    outcome.exit_code = 1;
  else
    outcome.exit_code = 0;
  return outcome;
}

}  // namespace scatlab
