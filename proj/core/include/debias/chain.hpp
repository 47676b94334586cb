#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "debias/random.hpp"

namespace debias {

/// A Markov chain X_{i+1} = g(X_i, U_i) with a real functional f.
///
/// `advance` applies g in place; it must be deterministic in (state,
/// innovation). `functional` must be deterministic and finite on every
/// reachable state. Models are immutable and may be shared across threads.
template <typename M>
concept ChainModel =
    std::copyable<M> &&
    requires(const M& m, typename M::State& x, const typename M::State& cx,
             const typename M::Innovation& u, RandomSource& rng) {
      { m.initial_state() } -> std::convertible_to<typename M::State>;
      { m.sample_innovation(rng) } -> std::convertible_to<typename M::Innovation>;
      { m.advance(x, u) } -> std::same_as<void>;
      { m.functional(cx) } -> std::convertible_to<double>;
    };

/// Anything that hands out innovations one at a time.
template <typename S, typename Innovation>
concept InnovationSource = requires(S& s) {
  { s.draw() } -> std::convertible_to<Innovation>;
};

/// Counts calls to the transition map g. Evaluations of f are free.
class CostCounter {
 public:
  void tick(std::uint64_t calls = 1) noexcept { g_calls_ += calls; }
  std::uint64_t g_calls() const noexcept { return g_calls_; }

 private:
  std::uint64_t g_calls_ = 0;
};

/// Fresh innovations for one model, drawn from a single-owner random source.
template <ChainModel M>
class InnovationStream {
 public:
  InnovationStream(const M& model, RandomSource source)
      : model_(&model), source_(std::move(source)) {}

  typename M::Innovation draw() { return model_->sample_innovation(source_); }
  RandomSource& source() noexcept { return source_; }

 private:
  const M* model_;
  RandomSource source_;
};

/// Pure form of the transition: returns g(state, u).
template <ChainModel M>
typename M::State transition(const M& model, typename M::State state,
                             const typename M::Innovation& u) {
  model.advance(state, u);
  return state;
}

/// G_n(state; u_0, ..., u_{n-1}).
template <ChainModel M>
typename M::State iterate(const M& model, typename M::State state,
                          std::span<const typename M::Innovation> innovations,
                          CostCounter& cost) {
  for (const auto& u : innovations) {
    model.advance(state, u);
    cost.tick();
  }
  return state;
}

/// Advances one chain `steps` times without accumulating anything.
template <ChainModel M, InnovationSource<typename M::Innovation> S>
void run_forward(const M& model, typename M::State& state, std::uint64_t steps,
                 S& stream, CostCounter& cost) {
  for (std::uint64_t i = 0; i < steps; ++i) {
    model.advance(state, stream.draw());
  }
  cost.tick(steps);
}

/// The LongRun procedure over h+1 coupled chains.
///
/// For each step i in [0, K): when i >= B, adds f(state j) to sum j; then one
/// innovation is drawn and every chain is advanced with it, index 0 first.
/// States are left advanced K steps.
template <ChainModel M, InnovationSource<typename M::Innovation> S>
std::vector<double> long_run_coupled(const M& model,
                                     std::span<typename M::State> states,
                                     std::uint64_t burn_in, std::uint64_t steps,
                                     S& stream, CostCounter& cost) {
  if (burn_in >= steps) {
    throw std::invalid_argument("long_run_coupled: burn-in must be below the step count");
  }
  std::vector<double> sums(states.size(), 0.0);
  for (std::uint64_t i = 0; i < steps; ++i) {
    const typename M::Innovation u = stream.draw();
    const bool accumulate = i >= burn_in;
    for (std::size_t j = 0; j < states.size(); ++j) {
      if (accumulate) sums[j] += model.functional(states[j]);
      model.advance(states[j], u);
      cost.tick();
    }
  }
  return sums;
}

}  // namespace debias
