#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "debias/experiment.hpp"

namespace ex = debias::experiment;

namespace {

constexpr int kConfigError = 2;

std::ostream& open_out(const std::optional<std::string>& path, std::ofstream& file) {
  if (!path || *path == "-") return std::cout;
  file.open(*path);
  if (!file) throw ex::ConfigError("field 'out': cannot open '" + *path + "' for writing");
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unbiased steady-state Monte Carlo experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> sidecar;

  auto* run = app.add_subcommand("run", "Run one method over a list of horizons");
  run->add_option("--config", config_path, "JSON configuration")->required();
  run->add_option("--reps", reps, "Override replications");
  run->add_option("--seed", seed, "Override seed");
  run->add_option("--out", out, "CSV output path ('-' for stdout)");
  run->add_option("--sidecar", sidecar, "JSON metadata output path");

  auto* sweep = app.add_subcommand("sweep", "Bias and std of the long-run average per k");
  sweep->add_option("--config", config_path, "JSON configuration")->required();
  sweep->add_option("--reps", reps, "Override replications");
  sweep->add_option("--seed", seed, "Override seed");
  sweep->add_option("--out", out, "CSV output path ('-' for stdout)");

  std::string family = "oblivious_exponential";
  double delta = 0.5;
  std::uint64_t k = 1000;
  std::optional<std::uint64_t> burn_in_prime;
  std::string nu_text;
  auto* levels = app.add_subcommand("levels", "List a level distribution");
  levels->add_option("--family", family, "oblivious_exponential, oblivious_power or nu_dependent");
  levels->add_option("--delta", delta, "θ exponent");
  levels->add_option("--k", k, "Horizon (nu_dependent)");
  levels->add_option("--b-prime", burn_in_prime, "Debiasing burn-in for q_nu_dependent");
  levels->add_option("--nu", nu_text, "Decay spec as JSON, e.g. {\"family\":\"geometric\",\"c\":1,\"xi\":0.5}");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() || sweep->parsed()) {
      ex::ExperimentConfig config = ex::load_config(config_path);
      if (reps) {
        if (*reps < 1) throw ex::ConfigError("field 'reps': must be >= 1");
        config.reps = *reps;
      }
      if (seed) config.seed = *seed;
      if (out) config.out = out;
      std::ofstream file;
      std::ostream& os = open_out(config.out, file);
      if (run->parsed()) {
        const auto rows = ex::run_experiment(config);
        ex::write_run_csv(os, rows);
        if (sidecar) config.sidecar = sidecar;
        if (config.sidecar) {
          std::ofstream meta(*config.sidecar);
          if (!meta) throw ex::ConfigError("field 'sidecar': cannot open '" + *config.sidecar + "'");
          meta << ex::sidecar_json(config, rows).dump(2) << '\n';
        }
      } else {
        ex::write_sweep_csv(os, ex::sweep_bias_std(config));
      }
      return 0;
    }

    ex::LevelFamily lf;
    if (family == "oblivious_exponential") {
      lf.kind = ex::LevelFamily::Kind::oblivious_exponential;
    } else if (family == "oblivious_power") {
      lf.kind = ex::LevelFamily::Kind::oblivious_power;
    } else if (family == "nu_dependent") {
      lf.kind = ex::LevelFamily::Kind::nu_dependent;
      if (nu_text.empty()) throw ex::ConfigError("field 'nu': required for nu_dependent");
      nlohmann::json spec;
      try {
        spec = nlohmann::json::parse(nu_text);
      } catch (const nlohmann::json::exception& e) {
        throw ex::ConfigError(std::string("field 'nu': invalid JSON: ") + e.what());
      }
      lf.nu_spec = spec;
      lf.nu = ex::parse_nu(spec);
    } else {
      throw ex::ConfigError("field 'family': unknown family '" + family + "'");
    }
    lf.delta = delta;
    try {
      ex::levels_inspect(std::cout, lf, k, burn_in_prime);
    } catch (const std::invalid_argument& e) {
      throw ex::ConfigError(std::string("field 'delta': ") + e.what());
    }
    return 0;
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
