#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/estimates.hpp"
#include "landau/galerkin.hpp"
#include "landau/report.hpp"
#include "landau/smoothing.hpp"

namespace landau {

/// Experiment envelope read from a JSON file (schema version 1) and CLI overrides.
struct RunConfig
{
  static constexpr int kSchemaVersion = 1;

  double gamma = -1.0;
  int degree_cap = 10;
  int m_max = 4;
  double horizon = 2.0;
  std::optional<std::uint64_t> seed;  ///< mandatory; validate() rejects a missing seed
  /// the refined run uses refine_factor·D modes
  int refine_factor = 2;

  /// geometric snapshots over [t_min, T] plus the extra times
  double t_min = 1e-4;
  int snapshot_count = 40;
  std::vector<double> extra_times = {0.5, 1.0};

  SmoothingOptions smoothing;
  /// verify-smoothing fails (exit 3) when fewer cells are resolved for t ≥ fraction_t_min
  double min_resolved_fraction = 0.0;
  double fraction_t_min = 0.05;

  ConvolutionSettings quadrature;
  int table_radii = 512;
  double table_r_max = 40.0;

  int estimate_degree_cap = 6;
  int estimate_m_max = 2;
  int estimate_samples = 100;
  double estimate_decay = 0.5;
  int trilinear_beta_max = 4;
  int extra_radial = 24;

  int probe_max_order = 6;
  double probe_r_max = 20.0;
  int probe_radii = 8;

  std::vector<double> gamma_sweep;

  std::filesystem::path cache_dir = "landau_cache";
  std::filesystem::path output_dir = "landau_out";

  /// Throws ConfigError naming the violated invariant.
  void validate() const;

  /// everything that affects results; directories are excluded
  nlohmann::ordered_json to_json() const;
  std::string hash() const;

  std::vector<double> snapshot_times() const;
  TableSettings table_settings() const;
  EstimateSettings estimate_settings() const;
};

/// Fields present in j override cfg; unknown keys throw ConfigError.
RunConfig parse_config(const nlohmann::json& j, RunConfig cfg = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig cfg = {});

/// LANDAU_CACHE_DIR and LANDAU_OUTPUT_DIR, when set, replace the directories.
void apply_environment(RunConfig& cfg);

enum class Command {
  coeffs,
  assemble,
  evolve,
  verify_smoothing,
  validate_estimates,
  pipeline,
};

Command parse_command(const std::string& name);
std::string command_name(Command c);

/// Runs one command for cfg (and every γ of the sweep, if any) and writes its artifacts.
/// Library exceptions propagate; see exit_code_for.
void run_command(Command command, const RunConfig& cfg, std::ostream& log);

/// 0 success, 2 config, 3 numerical tolerance, 4 capacity or headroom
int exit_code_for(const std::exception& e);
nlohmann::ordered_json error_json(const std::exception& e);

}  // namespace landau
