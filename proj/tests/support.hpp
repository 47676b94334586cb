#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "debias/chain.hpp"
#include "debias/random.hpp"

namespace debias::testing {

/// Replays a fixed list of innovations.
template <typename Innovation>
class VectorStream {
 public:
  explicit VectorStream(std::vector<Innovation> values) : values_(std::move(values)) {}
  Innovation draw() {
    if (next_ >= values_.size()) throw std::out_of_range("VectorStream exhausted");
    return values_[next_++];
  }
  std::size_t used() const { return next_; }

 private:
  std::vector<Innovation> values_;
  std::size_t next_ = 0;
};

/// f ≡ c on a chain that ignores its innovation.
class ConstantModel {
 public:
  using State = double;
  using Innovation = double;

  explicit ConstantModel(double c) : c_(c) {}
  State initial_state() const { return 0.0; }
  Innovation sample_innovation(RandomSource& rng) const { return rng.normal(); }
  void advance(State& x, Innovation u) const { x += u; }
  double functional(State) const { return c_; }

 private:
  double c_;
};

static_assert(ChainModel<ConstantModel>);

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return d;
}

/// Σ_{i=j}^{j+count-1} term(i), accumulated from the small end in long double.
inline double direct_sum(const std::function<long double(long double)>& term, std::size_t j,
                         std::size_t count) {
  long double s = 0.0L;
  for (std::size_t i = j + count; i-- > j;) s += term(static_cast<long double>(i));
  return static_cast<double>(s);
}

struct MeanSe {
  double mean;
  double se;
};

inline MeanSe mean_se(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  const long double m = s / static_cast<long double>(v.size());
  long double ss = 0.0L;
  for (double x : v) ss += (x - m) * (x - m);
  const long double var = ss / static_cast<long double>(v.size() - 1);
  return {static_cast<double>(m), static_cast<double>(std::sqrt(var / v.size()))};
}

}  // namespace debias::testing
