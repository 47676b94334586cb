#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "debias/decay.hpp"
#include "debias/theta.hpp"

namespace debias {

/// Law of the random level N used by the bias estimator.
///
/// Two constructions:
///  - oblivious: p_l = 1/(θ(l)2^l) - 1/(θ(l+1)2^{l+1}), closed form at every l.
///  - nu_dependent: p_l = (ν̄(k2^{l-2}) - ν̄(k2^{l-1})) / (2^l ν̄(k)) for l >= 2,
///    p_1 = (1 - Σ_{l>=2} p_l)/3, p_0 = 2 p_1. Levels up to the point where the
///    telescoped remainder ν̄(k2^{l-1})/ν̄(k) drops below 1e-12 are tabulated
///    at construction; deeper levels are evaluated on demand.
///
/// Immutable after construction and safe to share between threads.
class LevelDistribution {
 public:
  enum class Kind { nu_dependent, oblivious };

  static LevelDistribution oblivious(const ThetaFn& theta);
  static LevelDistribution nu_dependent(const TailSum& nubar, std::uint64_t k);

  double pmf(unsigned level) const;
  /// P(N >= level).
  double tail(unsigned level) const;
  /// P(N <= level).
  double cdf(unsigned level) const;

  /// Σ_{l>=0} 2^l p_l.
  double expected_doubling_mass() const noexcept { return doubling_mass_; }
  /// Σ_{l>=0} 1/θ(l); oblivious kind only.
  std::optional<double> theta_sum() const;

  Kind kind() const noexcept { return kind_; }
  const std::optional<ThetaFn>& theta() const noexcept { return theta_; }
  /// Levels tabulated at construction (nu_dependent kind); 0 for oblivious.
  unsigned tabulated_levels() const noexcept {
    return static_cast<unsigned>(cumulative_.size());
  }

  /// Inverse CDF: the smallest l with P(N <= l) >= u.
  unsigned sample(double u) const;

  /// Hard cap on sampled levels; k·2^N steps beyond it cannot be simulated.
  static constexpr unsigned kMaxLevel = 62;

 private:
  LevelDistribution() = default;

  double nu_dependent_pmf(unsigned level) const;

  Kind kind_ = Kind::oblivious;
  std::optional<ThetaFn> theta_;
  double doubling_mass_ = 0.0;

  // nu_dependent kind
  std::optional<TailSum> nubar_;
  std::uint64_t horizon_ = 0;
  double log_nubar_k_ = 0.0;
  std::vector<double> pmf_;
  std::vector<double> cumulative_;
};

/// Draws N from `dist` with uniform u in [0, 1).
inline unsigned sample_level(const LevelDistribution& dist, double u) {
  return dist.sample(u);
}

/// q = ν̄(⌊b'/2⌋)/ν̄(0), in (0, 1].
double q_nu_dependent(const TailSum& nubar, std::uint64_t burn_in_prime);

/// q = 1 / (3 Σ_l 2^l p_l).
double q_experimental(const LevelDistribution& dist);

}  // namespace debias
