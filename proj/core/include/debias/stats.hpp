#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>

namespace debias {

inline constexpr double kZ95 = 1.96;

/// Welford's one-pass mean and variance.
class RunningStats {
 public:
  void push(double x) noexcept {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  std::uint64_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  /// Sample variance with the n-1 denominator; needs count() >= 2.
  std::optional<double> variance() const noexcept {
    if (count_ < 2) return std::nullopt;
    return m2_ / static_cast<double>(count_ - 1);
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// One table row. Spread-dependent fields are empty for a single replication.
struct SummaryRow {
  std::uint64_t n_reps = 0;
  double mean = 0.0;
  std::optional<double> std;
  std::optional<double> se;
  std::optional<double> ci95_halfwidth;
  double avg_cost = 0.0;
  std::uint64_t total_cost = 0;
  std::optional<double> rmse;
  /// avg_cost · rmse². For SULR rows a replication's cost is its total.
  std::optional<double> cost_times_mse;
  std::optional<double> bias;
  std::optional<double> bias_se;
};

struct BiasEstimate {
  double mean;
  double se;
};

/// Row for an unbiased method: rmse = std. Throws on empty or mismatched input.
SummaryRow summarize(std::span<const double> values,
                     std::span<const std::uint64_t> costs);

/// Row for a biased method: rmse = sqrt(std² + bias²).
SummaryRow summarize_biased(std::span<const double> values,
                            std::span<const std::uint64_t> costs,
                            BiasEstimate bias);

/// Cost × MSE of a complete row. Throws std::logic_error if the row has no
/// spread (single replication).
double efficiency(const SummaryRow& row);

}  // namespace debias
