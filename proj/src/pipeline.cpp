#include "landau/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "landau/errors.hpp"
#include "landau/evolution.hpp"
#include "landau/random.hpp"

namespace landau {

namespace {

using ojson = nlohmann::ordered_json;

template <class T>
void read(const nlohmann::json& j, const char* key, T& out)
{
  if (j.contains(key)) {
    out = j.at(key).get<T>();
  }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known, const std::string& where)
{
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* name : known) {
      ok = ok || k == name;
    }
    if (!ok) {
      throw ConfigError("unknown config key '" + where + k + "'");
    }
  }
}

std::string gamma_tag(double g)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "gamma_%g", g);
  return buf;
}

// One γ: lazily built field, systems and traces shared by the commands.
class Run
{
 public:
  Run(const RunConfig& cfg, std::filesystem::path out, std::ostream& log)
      : cfg_(cfg)
      , out_(std::move(out))
      , log_(log)
  {
  }

  const RunConfig& cfg() const { return cfg_; }

  Provenance provenance(const std::string& module) const
  {
    Provenance p;
    p.add("config_hash", cfg_.hash());
    p.add("library_version", std::string(kLibraryVersion));
    p.add("schema_version", RunConfig::kSchemaVersion);
    p.add("module", module);
    p.add("gamma", cfg_.gamma);
    p.add("D", cfg_.degree_cap);
    return p;
  }

  void write(const std::string& name, const std::string& text)
  {
    write_text_file(out_ / name, text);
    files_.push_back(name);
    log_ << "  wrote " << (out_ / name).string() << '\n';
  }
  /// path for a file written by another serializer
  std::filesystem::path reserve(const std::string& name)
  {
    std::filesystem::create_directories(out_);
    files_.push_back(name);
    log_ << "  wrote " << (out_ / name).string() << '\n';
    return out_ / name;
  }
  void write(const std::string& name, const ojson& j) { write(name, j.dump(2) + "\n"); }

  const CoefficientField& field()
  {
    if (!field_) {
      bool hit = false;
      field_ = std::make_unique<CoefficientField>(
          CoefficientField::load_or_build(PotentialConfig(cfg_.gamma), cfg_.table_settings(), cfg_.cache_dir, &hit));
      log_ << "  coefficient table " << (hit ? "loaded from cache" : "built and cached") << '\n';
      if (field_->substitution_engaged()) {
        log_ << "  substitution path engaged near the origin (gamma = " << cfg_.gamma << ")\n";
      }
    }
    return *field_;
  }

  const GalerkinSystem& system(bool refined)
  {
    auto& slot = refined ? fine_ : coarse_;
    if (!slot) {
      const int cap = refined ? cfg_.refine_factor * cfg_.degree_cap : cfg_.degree_cap;
      const CoefficientField& f = field();
      const std::string key = f.cache_key() + ";D=" + std::to_string(cap) + ";ordering="
                              + std::to_string(BasisIndex::kOrderingVersion) + ";path=factorized";
      const auto path = cfg_.cache_dir / ("system_" + fnv1a_hex(key) + ".txt");
      if (std::filesystem::exists(path)) {
        slot = std::make_unique<GalerkinSystem>(load_system(path));
        log_ << "  system D=" << cap << " loaded from cache\n";
      } else {
        slot = std::make_unique<GalerkinSystem>(assemble(cap, f));
        save_system(*slot, path);
        log_ << "  system D=" << cap << " assembled and cached\n";
      }
      check_invariants(*slot);
    }
    return *slot;
  }

  const Propagator& propagator(bool refined)
  {
    auto& slot = refined ? fine_prop_ : coarse_prop_;
    if (!slot) {
      slot = std::make_unique<Propagator>(system(refined));
    }
    return *slot;
  }

  /// ±1 coefficients on the refined basis; the coarse run starts from its truncation
  SpectralFunction datum() const
  {
    SeededRng rng(*cfg_.seed);
    SpectralFunction f(cfg_.refine_factor * cfg_.degree_cap);
    for (double& c : f.coefficients()) {
      c = rng.sign();
    }
    return f;
  }

  const EvolutionTrace& trace(bool refined)
  {
    auto& slot = refined ? fine_trace_ : coarse_trace_;
    if (!slot) {
      const SpectralFunction f0 = refined ? datum() : datum().truncated(cfg_.degree_cap);
      slot = std::make_unique<EvolutionTrace>(evolve_exact(propagator(refined), f0, cfg_.snapshot_times()));
    }
    return *slot;
  }

  void finish(const std::string& command)
  {
    ojson m;
    m["command"] = command;
    m["config_hash"] = cfg_.hash();
    m["library_version"] = kLibraryVersion;
    m["config"] = cfg_.to_json();
    m["files"] = files_;
    write_text_file(out_ / "manifest.json", m.dump(2) + "\n");
  }

 private:
  const RunConfig& cfg_;
  std::filesystem::path out_;
  std::ostream& log_;
  std::vector<std::string> files_;
  std::unique_ptr<CoefficientField> field_;
  std::unique_ptr<GalerkinSystem> coarse_, fine_;
  std::unique_ptr<Propagator> coarse_prop_, fine_prop_;
  std::unique_ptr<EvolutionTrace> coarse_trace_, fine_trace_;
};

ojson range_json(const RatioRange& r)
{
  return ojson{{"lower", r.lower}, {"upper", r.upper}};
}

void cmd_coeffs(Run& run)
{
  const RunConfig& c = run.cfg();
  const CoefficientField& field = run.field();
  field.save_csv(run.reserve("coefficients.csv"));

  const auto rows = probe_derivative_bound(field.config(), c.probe_max_order, probe_points(c.probe_r_max, c.probe_radii),
                                           c.quadrature);
  const std::vector<double> radii = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0};
  ojson j;
  j["provenance"] = run.provenance("coefficients").to_json();
  j["table_key"] = fnv1a_hex(field.cache_key());
  j["substitution_engaged"] = field.substitution_engaged();
  j["min_eigenvalue"] = field.min_eigenvalue();
  ojson bound = ojson::array();
  for (const auto& r : rows) {
    bound.push_back({{"order", r.order},
                     {"max_ratio", r.max_ratio},
                     {"argmax_beta", r.argmax_beta.str()},
                     {"argmax_point", {r.argmax_point[0], r.argmax_point[1], r.argmax_point[2]}}});
  }
  j["derivative_bound"] = bound;
  j["power_moment"] = range_json(probe_power_moment(field.config(), radii, c.quadrature));
  j["abar_growth"] = range_json(probe_abar_growth(field, radii));
  const DriftBoundProbe d = probe_drift_bounds(field, radii);
  j["drift_bounds"] = {{"potential", range_json(d.potential)}, {"drift", range_json(d.drift)}};
  run.write("coeffs.json", j);
}

void cmd_assemble(Run& run)
{
  ojson j;
  j["provenance"] = run.provenance("galerkin").to_json();
  ojson systems = ojson::array();
  for (bool refined : {false, true}) {
    const GalerkinSystem& s = run.system(refined);
    const InvariantReport inv = check_invariants(s, false);
    systems.push_back({{"D", s.degree_cap},
                       {"size", s.size()},
                       {"points_per_axis", s.points_per_axis},
                       {"asymmetry", inv.asymmetry},
                       {"min_eigenvalue", inv.min_eigenvalue},
                       {"kernel_row", inv.kernel_row},
                       {"ok", inv.ok},
                       {"spectral_gap", spectral_gap(s)}});
  }
  j["systems"] = systems;
  run.write("assemble.json", j);
}

void cmd_evolve(Run& run)
{
  ojson j;
  for (bool refined : {false, true}) {
    Provenance p = run.provenance("evolution");
    p.add("run", refined ? "refined" : "coarse");
    const EvolutionTrace& tr = run.trace(refined);
    run.write(refined ? "trace_refined.csv" : "trace.csv", trace_csv(tr, p));
    j[refined ? "refined" : "coarse"] = trace_manifest(tr, p);
  }
  run.write("trace.json", j);
}

void cmd_verify_smoothing(Run& run)
{
  const RunConfig& c = run.cfg();
  const NormEvaluator coarse(run.field(), c.degree_cap + c.m_max, {c.extra_radial});
  const NormEvaluator fine(run.field(), c.refine_factor * c.degree_cap + c.m_max, {c.extra_radial});
  const SmoothingReport rep = fit_analytic_constant(run.trace(false), run.trace(true), coarse, fine, c.m_max, c.smoothing);
  const Provenance p = run.provenance("smoothing");
  run.write("smoothing.csv", smoothing_csv(rep, p));
  ojson j = smoothing_summary(rep, p);
  const double frac = rep.resolved_fraction(c.fraction_t_min);
  j["resolved_fraction"] = {{"t_min", c.fraction_t_min}, {"value", frac}, {"required", c.min_resolved_fraction}};
  run.write("smoothing.json", j);
  if (frac < c.min_resolved_fraction) {
    throw NumericalToleranceError("resolved fraction of smoothing cells below the configured minimum", frac,
                                  c.min_resolved_fraction);
  }
}

void cmd_validate_estimates(Run& run)
{
  const RunConfig& c = run.cfg();
  const CoefficientField& field = run.field();
  const EstimateSettings s = c.estimate_settings();
  const std::vector<double> thetas = {0.0, 0.5 * c.gamma, c.gamma};
  const Provenance p = run.provenance("estimates");

  std::vector<EstimateReport> reports;
  reports.push_back(validate_lemma22(field, s, thetas, c.trilinear_beta_max));
  CommutatorReports pr = validate_prop31(field, s, c.estimate_m_max);
  reports.push_back(pr.c0);
  reports.push_back(pr.c0_beta2);
  reports.push_back(pr.zero_order);
  reports.push_back(pr.lower_order);
  reports.push_back(validate_coercivity(field, s, thetas));
  const NormEvaluator ne(field, c.degree_cap, {c.extra_radial});
  reports.push_back(validate_energy(run.propagator(false), run.trace(false), ne, pr.zero_order.constant));

  ojson j;
  j["provenance"] = p.to_json();
  ojson all = ojson::array();
  for (const auto& r : reports) {
    run.write("estimates_" + r.inequality + ".csv", estimate_csv(r, p));
    all.push_back(estimate_json(r, p));
  }
  j["reports"] = all;
  j["summary"] = {{"C0", pr.c0.constant},
                  {"C0_beta2", pr.c0_beta2.constant},
                  {"C0_zero_order", pr.zero_order.constant},
                  {"lower_order", pr.lower_order.constant},
                  {"trilinear", reports.front().constant},
                  {"C1", reports[5].constant},
                  {"energy_margin", reports.back().value("margin")},
                  {"energy_identity_residual", reports.back().value("identity_residual")}};
  run.write("estimates.json", j);
}

void run_one(Command command, const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log)
{
  log << "[" << command_name(command) << "] gamma=" << cfg.gamma << " D=" << cfg.degree_cap << " -> " << out.string()
      << '\n';
  Run run(cfg, out, log);
  switch (command) {
    case Command::coeffs:
      cmd_coeffs(run);
      break;
    case Command::assemble:
      cmd_assemble(run);
      break;
    case Command::evolve:
      cmd_evolve(run);
      break;
    case Command::verify_smoothing:
      cmd_verify_smoothing(run);
      break;
    case Command::validate_estimates:
      cmd_validate_estimates(run);
      break;
    case Command::pipeline:
      cmd_coeffs(run);
      cmd_assemble(run);
      cmd_evolve(run);
      cmd_verify_smoothing(run);
      cmd_validate_estimates(run);
      break;
  }
  run.finish(command_name(command));
}

}  // namespace

void RunConfig::validate() const
{
  auto check_gamma = [](double g) {
    if (!(g > -3.0 && g < 0.0)) {
      throw ConfigError("gamma = " + fmt17(g) + " is outside the soft-potential range -3 < gamma < 0");
    }
  };
  check_gamma(gamma);
  for (double g : gamma_sweep) {
    check_gamma(g);
  }
  if (!seed) {
    throw ConfigError("seed is mandatory");
  }
  if (!(horizon > 0.0)) {
    throw ConfigError("horizon T must be positive");
  }
  if (m_max < 1 || degree_cap < 0) {
    throw ConfigError("m_max must be at least 1 and D nonnegative");
  }
  if (degree_cap < m_max + 2) {
    throw CapacityError("headroom: D = " + std::to_string(degree_cap) + " must be at least m_max + 2 = "
                        + std::to_string(m_max + 2));
  }
  if (estimate_m_max < 0 || estimate_degree_cap < estimate_m_max + 2) {
    throw CapacityError("headroom: estimates degree cap must be at least estimates m_max + 2");
  }
  if (refine_factor < 2) {
    throw ConfigError("refine_factor must be at least 2");
  }
  if (!(t_min > 0.0 && t_min <= horizon) || snapshot_count < 1) {
    throw ConfigError("snapshots need 0 < t_min <= T and count >= 1");
  }
  for (double t : extra_times) {
    if (!(t > 0.0 && t <= horizon)) {
      throw ConfigError("extra snapshot times must lie in (0, T]");
    }
  }
  if (estimate_samples < 1 || trilinear_beta_max < 0 || probe_max_order < 1 || probe_radii < 1) {
    throw ConfigError("sample and probe counts must be positive");
  }
  if (table_radii < 8 || !(table_r_max > 0.0)) {
    throw ConfigError("coefficient table needs at least 8 radii and a positive r_max");
  }
}

nlohmann::ordered_json RunConfig::to_json() const
{
  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["gamma"] = gamma;
  j["degree_cap"] = degree_cap;
  j["m_max"] = m_max;
  j["horizon"] = horizon;
  j["seed"] = seed ? ojson(*seed) : ojson(nullptr);
  j["refine_factor"] = refine_factor;
  j["snapshots"] = {{"t_min", t_min}, {"count", snapshot_count}, {"extra", extra_times}};
  j["smoothing"] = {{"resolve_tolerance", smoothing.resolve_tolerance},
                    {"slope_t_min", smoothing.slope_t_min},
                    {"slope_t_max", smoothing.slope_t_max},
                    {"reference_time", smoothing.reference_time},
                    {"min_resolved_fraction", min_resolved_fraction},
                    {"fraction_t_min", fraction_t_min}};
  j["quadrature"] = {{"rel_tol", quadrature.rel_tol},
                     {"floor_ratio", quadrature.floor_ratio},
                     {"max_intervals", quadrature.max_intervals},
                     {"gaussian_window", quadrature.gaussian_window},
                     {"angular_cutoff", quadrature.angular_cutoff},
                     {"substitution_below", quadrature.substitution_below},
                     {"table_radii", table_radii},
                     {"table_r_max", table_r_max}};
  j["estimates"] = {{"degree_cap", estimate_degree_cap}, {"m_max", estimate_m_max},     {"samples", estimate_samples},
                    {"decay", estimate_decay},           {"beta_max", trilinear_beta_max}, {"extra_radial", extra_radial}};
  j["probes"] = {{"max_order", probe_max_order}, {"r_max", probe_r_max}, {"radii", probe_radii}};
  j["gamma_sweep"] = gamma_sweep;
  return j;
}

std::string RunConfig::hash() const
{
  return fnv1a_hex(to_json().dump());
}

std::vector<double> RunConfig::snapshot_times() const
{
  std::vector<double> t = geometric_times(t_min, horizon, snapshot_count);
  t.insert(t.end(), extra_times.begin(), extra_times.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

TableSettings RunConfig::table_settings() const
{
  TableSettings s;
  s.radii = table_radii;
  s.r_max = table_r_max;
  s.quadrature = quadrature;
  return s;
}

EstimateSettings RunConfig::estimate_settings() const
{
  EstimateSettings s;
  s.degree_cap = estimate_degree_cap;
  s.seed = seed.value_or(0);
  s.samples = estimate_samples;
  s.decay = estimate_decay;
  s.extra_radial = extra_radial;
  s.quadrature = quadrature;
  return s;
}

RunConfig parse_config(const nlohmann::json& j, RunConfig cfg)
{
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  try {
    reject_unknown(j,
                   {"schema_version", "gamma", "degree_cap", "m_max", "horizon", "seed", "refine_factor", "snapshots",
                    "smoothing", "quadrature", "estimates", "probes", "gamma_sweep", "cache_dir", "output_dir"},
                   "");
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != RunConfig::kSchemaVersion) {
      throw ConfigError("unsupported config schema_version " + j.at("schema_version").dump());
    }
    read(j, "gamma", cfg.gamma);
    read(j, "degree_cap", cfg.degree_cap);
    read(j, "m_max", cfg.m_max);
    read(j, "horizon", cfg.horizon);
    if (j.contains("seed") && !j.at("seed").is_null()) {
      cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    read(j, "refine_factor", cfg.refine_factor);
    read(j, "gamma_sweep", cfg.gamma_sweep);
    if (j.contains("cache_dir")) {
      cfg.cache_dir = j.at("cache_dir").get<std::string>();
    }
    if (j.contains("output_dir")) {
      cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("snapshots")) {
      const auto& s = j.at("snapshots");
      reject_unknown(s, {"t_min", "count", "extra"}, "snapshots.");
      read(s, "t_min", cfg.t_min);
      read(s, "count", cfg.snapshot_count);
      read(s, "extra", cfg.extra_times);
    }
    if (j.contains("smoothing")) {
      const auto& s = j.at("smoothing");
      reject_unknown(s,
                     {"resolve_tolerance", "slope_t_min", "slope_t_max", "reference_time", "min_resolved_fraction",
                      "fraction_t_min"},
                     "smoothing.");
      read(s, "resolve_tolerance", cfg.smoothing.resolve_tolerance);
      read(s, "slope_t_min", cfg.smoothing.slope_t_min);
      read(s, "slope_t_max", cfg.smoothing.slope_t_max);
      read(s, "reference_time", cfg.smoothing.reference_time);
      read(s, "min_resolved_fraction", cfg.min_resolved_fraction);
      read(s, "fraction_t_min", cfg.fraction_t_min);
    }
    if (j.contains("quadrature")) {
      const auto& s = j.at("quadrature");
      reject_unknown(s,
                     {"rel_tol", "floor_ratio", "max_intervals", "gaussian_window", "angular_cutoff",
                      "substitution_below", "table_radii", "table_r_max"},
                     "quadrature.");
      read(s, "rel_tol", cfg.quadrature.rel_tol);
      read(s, "floor_ratio", cfg.quadrature.floor_ratio);
      read(s, "max_intervals", cfg.quadrature.max_intervals);
      read(s, "gaussian_window", cfg.quadrature.gaussian_window);
      read(s, "angular_cutoff", cfg.quadrature.angular_cutoff);
      read(s, "substitution_below", cfg.quadrature.substitution_below);
      read(s, "table_radii", cfg.table_radii);
      read(s, "table_r_max", cfg.table_r_max);
    }
    if (j.contains("estimates")) {
      const auto& s = j.at("estimates");
      reject_unknown(s, {"degree_cap", "m_max", "samples", "decay", "beta_max", "extra_radial"}, "estimates.");
      read(s, "degree_cap", cfg.estimate_degree_cap);
      read(s, "m_max", cfg.estimate_m_max);
      read(s, "samples", cfg.estimate_samples);
      read(s, "decay", cfg.estimate_decay);
      read(s, "beta_max", cfg.trilinear_beta_max);
      read(s, "extra_radial", cfg.extra_radial);
    }
    if (j.contains("probes")) {
      const auto& s = j.at("probes");
      reject_unknown(s, {"max_order", "r_max", "radii"}, "probes.");
      read(s, "max_order", cfg.probe_max_order);
      read(s, "r_max", cfg.probe_r_max);
      read(s, "radii", cfg.probe_radii);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig cfg)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j, std::move(cfg));
}

void apply_environment(RunConfig& cfg)
{
  if (const char* c = std::getenv("LANDAU_CACHE_DIR"); c != nullptr && *c != '\0') {
    cfg.cache_dir = c;
  }
  if (const char* o = std::getenv("LANDAU_OUTPUT_DIR"); o != nullptr && *o != '\0') {
    cfg.output_dir = o;
  }
}

Command parse_command(const std::string& name)
{
  for (Command c : {Command::coeffs, Command::assemble, Command::evolve, Command::verify_smoothing,
                    Command::validate_estimates, Command::pipeline}) {
    if (command_name(c) == name) {
      return c;
    }
  }
  throw ConfigError("unknown command '" + name + "'");
}

std::string command_name(Command c)
{
  switch (c) {
    case Command::coeffs:
      return "coeffs";
    case Command::assemble:
      return "assemble";
    case Command::evolve:
      return "evolve";
    case Command::verify_smoothing:
      return "verify-smoothing";
    case Command::validate_estimates:
      return "validate-estimates";
    case Command::pipeline:
      return "pipeline";
  }
  return "unknown";
}

void run_command(Command command, const RunConfig& cfg, std::ostream& log)
{
  cfg.validate();
  if (cfg.gamma_sweep.empty()) {
    run_one(command, cfg, cfg.output_dir, log);
    return;
  }
  for (double g : cfg.gamma_sweep) {
    RunConfig one = cfg;
    one.gamma = g;
    one.gamma_sweep.clear();
    run_one(command, one, cfg.output_dir / gamma_tag(g), log);
  }
}

int exit_code_for(const std::exception& e)
{
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) {
    return 2;
  }
  if (dynamic_cast<const CapacityError*>(&e) != nullptr) {
    return 4;
  }
  if (dynamic_cast<const NumericalToleranceError*>(&e) != nullptr
      || dynamic_cast<const InvariantViolation*>(&e) != nullptr
      || dynamic_cast<const InsufficientDataError*>(&e) != nullptr
      || dynamic_cast<const SingularKernelError*>(&e) != nullptr) {
    return 3;
  }
  return 1;
}

nlohmann::ordered_json error_json(const std::exception& e)
{
  ojson j;
  const int code = exit_code_for(e);
  j["exit_code"] = code;
  j["kind"] = code == 2 ? "config" : code == 3 ? "numerical" : code == 4 ? "capacity" : "internal";
  j["message"] = e.what();
  if (const auto* n = dynamic_cast<const NumericalToleranceError*>(&e)) {
    j["achieved"] = n->achieved();
    j["target"] = n->target();
  }
  return j;
}

}  // namespace landau
