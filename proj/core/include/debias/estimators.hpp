#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "debias/chain.hpp"
#include "debias/levels.hpp"
#include "debias/random.hpp"
#include "debias/stats.hpp"

namespace debias {

/// One estimator output together with the number of g calls it took.
struct EstimatorRun {
  double value = 0.0;
  std::uint64_t g_calls = 0;
  std::optional<unsigned> level_drawn;
  /// Whether the bias correction was taken (ULR only).
  std::optional<bool> coin;
};

struct EstimatorConfig {
  std::uint64_t k = 1;
  std::uint64_t burn_in = 0;
  std::uint64_t burn_in_prime = 0;
  double q = 1.0;
  LevelDistribution levels;
  std::uint64_t seed = 0;

  /// Requires 0 <= b <= b', 2b' <= k and q in (0, 1].
  void validate() const {
    if (k < 1) throw std::invalid_argument("estimator config: k must be >= 1");
    if (burn_in > burn_in_prime) {
      throw std::invalid_argument("estimator config: burn-in must not exceed b'");
    }
    if (2 * burn_in_prime > k) {
      throw std::invalid_argument("estimator config: 2b' must not exceed k");
    }
    if (!(q > 0.0 && q <= 1.0)) {
      throw std::invalid_argument("estimator config: q must lie in (0, 1]");
    }
  }
};

/// b' = max(b, ⌈⌈√k⌉/2⌉).
inline std::uint64_t burn_in_prime_sqrt(std::uint64_t burn_in, std::uint64_t k) {
  auto root = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(k))));
  while (root * root < k) ++root;
  while (root > 0 && (root - 1) * (root - 1) >= k) --root;
  return std::max(burn_in, (root + 1) / 2);
}

/// ⌈nq⌉, nudged down so that nq landing a hair above an integer does not
/// round up.
inline std::uint64_t ceil_nq(std::uint64_t n, double q) {
  return static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * q - 1e-12));
}

namespace detail {

template <ChainModel M>
class BorrowedStream {
 public:
  BorrowedStream(const M& model, RandomSource& rng) : model_(&model), rng_(&rng) {}
  typename M::Innovation draw() { return model_->sample_innovation(*rng_); }

 private:
  const M* model_;
  RandomSource* rng_;
};

}  // namespace detail

/// Long-run average f_{k,b}: (1/(k-b)) Σ_{b<=i<k} f(X_i). Costs k g calls.
template <ChainModel M>
EstimatorRun lr(const M& model, std::uint64_t k, std::uint64_t burn_in,
                RandomSource& rng) {
  if (burn_in >= k) throw std::invalid_argument("lr: burn-in must be below k");
  detail::BorrowedStream<M> stream(model, rng);
  CostCounter cost;
  typename M::State state = model.initial_state();
  const auto sums = long_run_coupled(model, std::span<typename M::State>(&state, 1),
                                     burn_in, k, stream, cost);
  return {sums[0] / static_cast<double>(k - burn_in), cost.g_calls(), std::nullopt,
          std::nullopt};
}

/// Randomized estimate of E f_{k,b'} - π(f).
///
/// Draws N first, then runs a warm chain K = k 2^N steps from X_0, restarts a
/// cold copy at X_0 and drives both with common innovations for K more
/// steps, summing from B = k(2^N - 1) + b'. Returns (S_cold - S_warm) /
/// (p_N (k - b')). Costs 3 k 2^N g calls.
template <ChainModel M>
EstimatorRun bias_estimate(const M& model, std::uint64_t k, std::uint64_t burn_in_prime,
                           const LevelDistribution& levels, RandomSource& rng) {
  if (k < 2 || 2 * burn_in_prime > k) {
    throw std::invalid_argument("bias_estimate: need k >= 2 and b' <= k/2");
  }
  const unsigned level = levels.sample(rng.uniform());
  if (level + static_cast<unsigned>(std::bit_width(k)) >= 63) {
    throw std::overflow_error("bias_estimate: k 2^N exceeds the step counter");
  }
  const std::uint64_t horizon = k << level;
  const std::uint64_t start = k * ((std::uint64_t{1} << level) - 1) + burn_in_prime;

  detail::BorrowedStream<M> stream(model, rng);
  CostCounter cost;
  std::vector<typename M::State> states;
  states.reserve(2);
  states.push_back(model.initial_state());
  run_forward(model, states[0], horizon, stream, cost);
  states.push_back(model.initial_state());
  const auto sums = long_run_coupled(model, std::span<typename M::State>(states), start,
                                     horizon, stream, cost);
  const double weight = levels.pmf(level) * static_cast<double>(k - burn_in_prime);
  return {(sums[1] - sums[0]) / weight, cost.g_calls(), level, std::nullopt};
}

/// Unbiased long-run estimator for one replication.
///
/// Computes f_{k,b'}; with probability q subtracts BIAS/q. Chain, coin and
/// bias draws come from separate substreams of (seed, replication).
template <ChainModel M>
EstimatorRun ulr(const M& model, const EstimatorConfig& config,
                 std::uint64_t replication = 0) {
  config.validate();
  RandomSource coin_rng = RandomSource::substream(config.seed, replication, StreamRole::coin);
  const bool take_bias = coin_rng.uniform() <= config.q;

  RandomSource chain_rng =
      RandomSource::substream(config.seed, replication, StreamRole::chain);
  EstimatorRun run = lr(model, config.k, config.burn_in_prime, chain_rng);
  run.coin = take_bias;
  if (take_bias) {
    RandomSource bias_rng =
        RandomSource::substream(config.seed, replication, StreamRole::bias);
    const EstimatorRun bias =
        bias_estimate(model, config.k, config.burn_in_prime, config.levels, bias_rng);
    run.value -= bias.value / config.q;
    run.g_calls += bias.g_calls;
    run.level_drawn = bias.level_drawn;
  }
  return run;
}

struct StratifiedRun {
  EstimatorRun run;
  std::uint64_t n = 0;
  std::uint64_t bias_draws = 0;
  /// Sample variances of the LR and BIAS components; empty below two draws.
  std::optional<double> lr_variance;
  std::optional<double> bias_variance;

  /// Plug-in standard error sqrt(var_LR/n + var_BIAS/m).
  std::optional<double> standard_error() const {
    if (!lr_variance || !bias_variance) return std::nullopt;
    return std::sqrt(*lr_variance / static_cast<double>(n) +
                     *bias_variance / static_cast<double>(bias_draws));
  }
};

/// Stratified estimator: mean of n LR values minus mean of ⌈nq⌉ BIAS values.
template <ChainModel M>
StratifiedRun sulr(const M& model, const EstimatorConfig& config, std::uint64_t n,
                   std::uint64_t replication = 0) {
  config.validate();
  if (n < 1) throw std::invalid_argument("sulr: n must be >= 1");
  const std::uint64_t m = std::max<std::uint64_t>(1, ceil_nq(n, config.q));

  RandomSource chain_rng = RandomSource::substream(config.seed, replication, StreamRole::chain);
  RandomSource bias_rng = RandomSource::substream(config.seed, replication, StreamRole::bias);

  StratifiedRun out;
  out.n = n;
  out.bias_draws = m;
  RunningStats lr_stats;
  RunningStats bias_stats;
  std::uint64_t calls = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const EstimatorRun r = lr(model, config.k, config.burn_in_prime, chain_rng);
    lr_stats.push(r.value);
    calls += r.g_calls;
  }
  for (std::uint64_t i = 0; i < m; ++i) {
    const EstimatorRun r =
        bias_estimate(model, config.k, config.burn_in_prime, config.levels, bias_rng);
    bias_stats.push(r.value);
    calls += r.g_calls;
  }
  out.run.value = lr_stats.mean() - bias_stats.mean();
  out.run.g_calls = calls;
  out.lr_variance = lr_stats.variance();
  out.bias_variance = bias_stats.variance();
  return out;
}

/// Z = (Y_N - Y_{N-1}) / p_N for a given level, with Y_{-1} = 0. `sampler`
/// is called as sampler(level, rng) and returns (Y_{level-1}, Y_level) from one
/// joint draw.
template <typename Sampler>
double single_term_at(Sampler&& sampler, const LevelDistribution& levels, unsigned level,
                      RandomSource& rng) {
  const std::pair<double, double> y = sampler(level, rng);
  const double previous = level == 0 ? 0.0 : y.first;
  return (y.second - previous) / levels.pmf(level);
}

/// Single-term randomized estimator: draws N, then evaluates single_term_at.
template <typename Sampler>
double single_term(Sampler&& sampler, const LevelDistribution& levels, RandomSource& rng) {
  const unsigned level = levels.sample(rng.uniform());
  return single_term_at(std::forward<Sampler>(sampler), levels, level, rng);
}

}  // namespace debias
