#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace mthccar {

enum class Direction { HigherBetter, LowerBetter };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

/// Cross-validated mean and standard error of one metric for one
/// (model, dataset) pair. se = sample std (K-1 denominator) / sqrt(K).
struct FoldStats {
  std::string model;
  std::string dataset;
  std::string metric;
  Direction direction = Direction::HigherBetter;
  std::vector<double> fold_values;  // empty when built from a published summary
  double mu = 0.0;
  double se = 0.0;

  [[nodiscard]] double lo() const { return mu - se; }
  [[nodiscard]] double hi() const { return mu + se; }
};

/// Throws ConfigError when fewer than two fold values are given.
FoldStats fold_stats(std::vector<double> values, std::string model, std::string dataset, std::string metric,
                     Direction direction);
FoldStats summary_stats(double mu, double se, std::string model, std::string dataset, std::string metric,
                        Direction direction);

struct OneSeOptions {
  // Slack added on both sides of the best model's region. Published grids
  // print rounded means; half a unit in their last digit restores them.
  double mean_tolerance = 0.0;
};

/// Picks the simplest model (earliest in `complexity_order`) whose mean lies
/// in [mu_best - se_best, mu_best + se_best]. Ties for the best mean go to
/// the simpler model. `cell` must share dataset, metric and direction.
std::string one_se_select(std::span<const FoldStats> cell, const std::vector<std::string>& complexity_order,
                          const OneSeOptions& options = {});

using CellKey = std::tuple<std::string, std::string, std::string>;  // model, dataset, metric

struct SelectionScores {
  std::vector<std::string> models;    // complexity order restricted to the grid
  std::vector<std::string> datasets;  // first-appearance order
  std::vector<std::string> metrics;   // first-appearance order
  std::map<CellKey, double> p_ab_components;
  std::map<std::string, double> p_ab_total;
  std::map<CellKey, int> psi;
  std::map<std::string, double> p_1se_total;
  std::map<std::string, double> weights;  // per metric
};

/// Default metric weights: 1 for acc_bi, auprc_w, mse and r2.
std::map<std::string, double> unit_metric_weights();

/// Default ordering of the multi-task variants by parameter count.
std::vector<std::string> default_complexity_order();

/// Relative gap to the per-cell best mean, negated for lower-is-better
/// metrics so worse is always negative. Throws UndefinedMetricError when the
/// best mean is 0 and ConfigError on an incomplete grid.
SelectionScores p_ab(std::span<const FoldStats> grid, const std::vector<std::string>& complexity_order);

/// 1SE winners per cell and their weight-summed counts per model. Metrics
/// without an entry in `weights` count with weight 1.
SelectionScores p_1se(std::span<const FoldStats> grid, const std::vector<std::string>& complexity_order,
                      const std::map<std::string, double>& weights = unit_metric_weights(),
                      const OneSeOptions& options = {});

/// Both score families in one pass.
SelectionScores select_models(std::span<const FoldStats> grid, const std::vector<std::string>& complexity_order,
                              const std::map<std::string, double>& weights = unit_metric_weights(),
                              const OneSeOptions& options = {});

}  // namespace mthccar
