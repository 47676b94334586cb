#include "debias/levels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace debias {
namespace {

constexpr double kRemainderStop = 1e-12;
constexpr unsigned kMaxTabulated = 400;

// log P(N >= l) = -log θ(l) - l·ln 2 for the oblivious kind.
double log_oblivious_tail(const ThetaFn& theta, unsigned level) {
  const double l = static_cast<double>(level);
  return -theta.log(l) - l * std::numbers::ln2;
}

}  // namespace

LevelDistribution LevelDistribution::oblivious(const ThetaFn& theta) {
  LevelDistribution dist;
  dist.kind_ = Kind::oblivious;
  dist.theta_ = theta;
  // 2^l p_l = 1/θ(l) - 1/(2θ(l+1)) telescopes to (Σ 1/θ(l) + 1)/2.
  dist.doubling_mass_ = 0.5 * theta.inverse_sum() + 0.5;
  return dist;
}

LevelDistribution LevelDistribution::nu_dependent(const TailSum& nubar,
                                                  std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("nu_dependent_distribution: k must be >= 1");
  LevelDistribution dist;
  dist.kind_ = Kind::nu_dependent;
  dist.nubar_ = nubar;
  dist.horizon_ = k;
  dist.log_nubar_k_ = nubar.log_value(static_cast<double>(k));

  const double kd = static_cast<double>(k);
  auto ratio = [&](double j) { return std::exp(nubar.log_value(j) - dist.log_nubar_k_); };

  std::vector<double> deep;  // p_2, p_3, ...
  double upper = 1.0;        // ν̄(k 2^{l-2}) / ν̄(k), starting at l = 2
  double sum_deep = 0.0;
  for (unsigned l = 2;; ++l) {
    if (l > kMaxTabulated) {
      throw std::runtime_error("nu_dependent_distribution: remainder did not vanish");
    }
    const double lower = ratio(kd * std::ldexp(1.0, static_cast<int>(l) - 1));
    const double p = std::ldexp(upper - lower, -static_cast<int>(l));
    deep.push_back(p);
    sum_deep += p;
    upper = lower;
    if (lower < kRemainderStop) break;
  }

  const double p1 = (1.0 - sum_deep) / 3.0;
  dist.pmf_.reserve(deep.size() + 2);
  dist.pmf_.push_back(2.0 * p1);
  dist.pmf_.push_back(p1);
  dist.pmf_.insert(dist.pmf_.end(), deep.begin(), deep.end());

  dist.cumulative_.resize(dist.pmf_.size());
  double acc = 0.0;
  for (std::size_t l = 0; l < dist.pmf_.size(); ++l) {
    acc += dist.pmf_[l];
    dist.cumulative_[l] = acc;
  }
  // Σ_{l>=2} 2^l p_l = 1 exactly by telescoping.
  dist.doubling_mass_ = dist.pmf_[0] + 2.0 * p1 + 1.0;
  return dist;
}

double LevelDistribution::nu_dependent_pmf(unsigned level) const {
  if (level < pmf_.size()) return pmf_[level];
  const double kd = static_cast<double>(horizon_);
  auto ratio = [&](int shift) {
    return std::exp(nubar_->log_value(kd * std::ldexp(1.0, shift)) - log_nubar_k_);
  };
  const int l = static_cast<int>(level);
  return std::ldexp(ratio(l - 2) - ratio(l - 1), -l);
}

double LevelDistribution::pmf(unsigned level) const {
  if (kind_ == Kind::nu_dependent) return nu_dependent_pmf(level);
  const double log_here = log_oblivious_tail(*theta_, level);
  const double log_next = log_oblivious_tail(*theta_, level + 1);
  return -std::exp(log_here) * std::expm1(log_next - log_here);
}

double LevelDistribution::tail(unsigned level) const {
  if (kind_ == Kind::oblivious) return std::exp(log_oblivious_tail(*theta_, level));
  if (level == 0) return 1.0;
  double t = 0.0;
  const unsigned last = std::max<unsigned>(level, tabulated_levels()) + 64;
  for (unsigned l = last; l >= level; --l) t += nu_dependent_pmf(l);
  return t;
}

double LevelDistribution::cdf(unsigned level) const {
  if (kind_ == Kind::oblivious) return -std::expm1(log_oblivious_tail(*theta_, level + 1));
  if (level < cumulative_.size()) return cumulative_[level];
  return 1.0 - tail(level + 1);
}

std::optional<double> LevelDistribution::theta_sum() const {
  if (kind_ != Kind::oblivious) return std::nullopt;
  return theta_->inverse_sum();
}

unsigned LevelDistribution::sample(double u) const {
  if (kind_ == Kind::oblivious) {
    unsigned l = 0;
    while (l < kMaxLevel && cdf(l) < u) ++l;
    return l;
  }
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it != cumulative_.end()) {
    return static_cast<unsigned>(std::distance(cumulative_.begin(), it));
  }
  unsigned l = tabulated_levels();
  double acc = cumulative_.back();
  for (; l < kMaxLevel; ++l) {
    acc += nu_dependent_pmf(l);
    if (acc >= u) return l;
  }
  return kMaxLevel;
}

double q_nu_dependent(const TailSum& nubar, std::uint64_t burn_in_prime) {
  const double j = static_cast<double>(burn_in_prime / 2);
  const double q = std::exp(nubar.log_value(j) - nubar.log_value(0.0));
  assert(q > 0.0 && q <= 1.0 + 1e-12);
  return std::clamp(q, std::numeric_limits<double>::min(), 1.0);
}

double q_experimental(const LevelDistribution& dist) {
  return 1.0 / (3.0 * dist.expected_doubling_mass());
}

}  // namespace debias
