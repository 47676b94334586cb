#include "debias/stats.hpp"

#include <stdexcept>

namespace debias {

SummaryRow summarize(std::span<const double> values,
                     std::span<const std::uint64_t> costs) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  if (values.size() != costs.size()) {
    throw std::invalid_argument("summarize: values and costs differ in length");
  }
  RunningStats stats;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    stats.push(values[i]);
    total += costs[i];
  }
  SummaryRow row;
  row.n_reps = stats.count();
  row.mean = stats.mean();
  row.total_cost = total;
  row.avg_cost = static_cast<double>(total) / static_cast<double>(row.n_reps);
  if (auto var = stats.variance()) {
    row.std = std::sqrt(*var);
    row.se = *row.std / std::sqrt(static_cast<double>(row.n_reps));
    row.ci95_halfwidth = kZ95 * *row.se;
    row.rmse = row.std;
    row.cost_times_mse = row.avg_cost * *var;
  }
  return row;
}

SummaryRow summarize_biased(std::span<const double> values,
                            std::span<const std::uint64_t> costs,
                            BiasEstimate bias) {
  SummaryRow row = summarize(values, costs);
  row.bias = bias.mean;
  row.bias_se = bias.se;
  if (row.std) {
    const double mse = *row.std * *row.std + bias.mean * bias.mean;
    row.rmse = std::sqrt(mse);
    row.cost_times_mse = row.avg_cost * mse;
  }
  return row;
}

double efficiency(const SummaryRow& row) {
  if (!row.cost_times_mse) {
    throw std::logic_error("efficiency: row has no spread estimate");
  }
  return *row.cost_times_mse;
}

}  // namespace debias
