// Command-line driver: coeffs, assemble, evolve, verify-smoothing,
// validate-estimates and pipeline over a JSON run configuration.

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "landau/errors.hpp"
#include "landau/pipeline.hpp"

namespace {

struct Overrides
{
  std::string config;
  std::optional<double> gamma;
  std::optional<int> degree_cap;
  std::optional<int> m_max;
  std::optional<double> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<std::string> cache_dir;
  std::optional<std::string> output_dir;
  std::vector<double> gamma_sweep;
};

void add_options(CLI::App& sub, Overrides& o)
{
  sub.add_option("-c,--config", o.config, "JSON run configuration (schema version 1)");
  sub.add_option("--gamma", o.gamma, "soft-potential exponent, -3 < gamma < 0");
  sub.add_option("-D,--degree-cap", o.degree_cap, "Hermite degree cap D");
  sub.add_option("--m-max", o.m_max, "highest derivative order");
  sub.add_option("-T,--horizon", o.horizon, "final time");
  sub.add_option("--seed", o.seed, "random seed (mandatory here or in the config)");
  sub.add_option("--samples", o.samples, "samples per estimate validator");
  sub.add_option("--cache-dir", o.cache_dir, "cache directory");
  sub.add_option("-o,--output-dir", o.output_dir, "output directory");
  sub.add_option("--gamma-sweep", o.gamma_sweep, "comma-separated gammas, one report set each")->delimiter(',');
}

landau::RunConfig resolve(const Overrides& o)
{
  landau::RunConfig cfg;
  if (!o.config.empty()) {
    cfg = landau::load_config(o.config, cfg);
  }
  landau::apply_environment(cfg);
  if (o.gamma) cfg.gamma = *o.gamma;
  if (o.degree_cap) cfg.degree_cap = *o.degree_cap;
  if (o.m_max) cfg.m_max = *o.m_max;
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.seed) cfg.seed = *o.seed;
  if (o.samples) cfg.estimate_samples = *o.samples;
  if (o.cache_dir) cfg.cache_dir = *o.cache_dir;
  if (o.output_dir) cfg.output_dir = *o.output_dir;
  if (!o.gamma_sweep.empty()) cfg.gamma_sweep = o.gamma_sweep;
  return cfg;
}

int fail(const std::exception& e)
{
  const auto j = landau::error_json(e);
  std::cerr << j.dump() << '\n';
  return j["exit_code"].get<int>();
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Spectral lab for the linear soft-potential Landau equation"};
  app.require_subcommand(1, 1);
  Overrides o;
  bool print_config = false;
  std::vector<std::pair<CLI::App*, landau::Command>> subs;
  for (auto c : {landau::Command::coeffs, landau::Command::assemble, landau::Command::evolve,
                 landau::Command::verify_smoothing, landau::Command::validate_estimates, landau::Command::pipeline}) {
    auto* sub = app.add_subcommand(landau::command_name(c));
    add_options(*sub, o);
    sub->add_flag("--print-config", print_config, "print the resolved configuration and exit");
    subs.emplace_back(sub, c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    return fail(landau::ConfigError(e.what()));
  }

  try {
    const landau::RunConfig cfg = resolve(o);
    if (print_config) {
      std::cout << cfg.to_json().dump(2) << '\n';
      return 0;
    }
    for (const auto& [sub, command] : subs) {
      if (sub->parsed()) {
        landau::run_command(command, cfg, std::cerr);
      }
    }
  } catch (const std::exception& e) {
    return fail(e);
  }
  return 0;
}
