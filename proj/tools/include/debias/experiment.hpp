#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "debias/decay.hpp"
#include "debias/levels.hpp"
#include "debias/models.hpp"
#include "debias/stats.hpp"

namespace debias::experiment {

/// Raised for malformed or inconsistent configuration; the message names the
/// offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { lr, ulr, sulr, bias };

std::string to_string(Method m);

/// b(k) = ⌊num·k/den⌋ evaluated exactly.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  std::uint64_t of(std::uint64_t k) const { return num * k / den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct LevelFamily {
  enum class Kind { oblivious_exponential, oblivious_power, nu_dependent };
  Kind kind = Kind::oblivious_exponential;
  double delta = 0.5;
  std::optional<NuSequence> nu;
  nlohmann::json nu_spec;

  LevelDistribution build(std::uint64_t k) const;
  std::string name() const;
};

struct QRule {
  enum class Kind { experimental, nu_dependent, fixed };
  Kind kind = Kind::experimental;
  double value = 0.0;
};

using AnyModel = std::variant<Ar1Model, GarchModel, QueueModel, GaussianModel>;

struct ExperimentConfig {
  nlohmann::json model_spec;
  Method method = Method::ulr;
  std::vector<std::uint64_t> k_values;
  Fraction burn_frac{1, 10};
  Fraction burn_prime_frac{1, 10};
  std::uint64_t reps = 10000;
  std::uint64_t n = 1;
  std::optional<std::uint64_t> bias_reps;
  LevelFamily level_family;
  QRule q_rule;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::optional<std::string> sidecar;

  std::uint64_t effective_bias_reps() const { return bias_reps.value_or(reps); }
};

/// Parses and validates a schema-1 JSON document.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

AnyModel build_model(const nlohmann::json& spec);
NuSequence parse_nu(const nlohmann::json& spec);

struct ExperimentRow {
  std::uint64_t k = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t burn_in_prime = 0;
  Method method = Method::ulr;
  double q = 1.0;
  std::uint64_t seed = 0;
  SummaryRow summary;
};

struct SweepRow {
  std::uint64_t k = 0;
  std::uint64_t burn_in = 0;
  double abs_bias = 0.0;
  std::optional<double> bias_ci95;
  std::optional<double> std;
};

/// Worker count: THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config,
                                          unsigned threads = thread_count());
std::vector<SweepRow> sweep_bias_std(const ExperimentConfig& config,
                                     unsigned threads = thread_count());

void write_run_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
nlohmann::json sidecar_json(const ExperimentConfig& config,
                            const std::vector<ExperimentRow>& rows);

/// Text listing of p_0..p_20 and the derived sums for a level family.
void levels_inspect(std::ostream& os, const LevelFamily& family, std::uint64_t k,
                    std::optional<std::uint64_t> burn_in_prime);

}  // namespace debias::experiment
