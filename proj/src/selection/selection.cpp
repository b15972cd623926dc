#include "mthccar/selection/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mthccar/error.hpp"

namespace mthccar {
namespace {

bool better(double a, double b, Direction d) { return d == Direction::HigherBetter ? a > b : a < b; }

std::size_t rank_of(const std::string& model, const std::vector<std::string>& order) {
  const auto it = std::find(order.begin(), order.end(), model);
  if (it == order.end()) throw ConfigError("model " + model + " is not in the complexity order");
  return static_cast<std::size_t>(it - order.begin());
}

template <class T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

struct Grid {
  std::vector<std::string> models, datasets, metrics;
  std::map<CellKey, const FoldStats*> at;

  [[nodiscard]] std::vector<FoldStats> cell(const std::string& d, const std::string& m) const {
    std::vector<FoldStats> out;
    for (const auto& model : models) out.push_back(*at.at({model, d, m}));
    return out;
  }
};

Grid index_grid(std::span<const FoldStats> grid, const std::vector<std::string>& order) {
  if (grid.empty()) throw ConfigError("empty stats grid");
  Grid g;
  std::vector<std::string> present;
  for (const auto& s : grid) {
    rank_of(s.model, order);
    push_unique(present, s.model);
    push_unique(g.datasets, s.dataset);
    push_unique(g.metrics, s.metric);
    if (!g.at.emplace(CellKey{s.model, s.dataset, s.metric}, &s).second) {
      throw ConfigError("duplicate grid entry (" + s.model + ", " + s.dataset + ", " + s.metric + ")");
    }
  }
  for (const auto& m : order) {
    if (std::find(present.begin(), present.end(), m) != present.end()) g.models.push_back(m);
  }
  std::string missing;
  for (const auto& m : g.models) {
    for (const auto& d : g.datasets) {
      for (const auto& k : g.metrics) {
        if (!g.at.count({m, d, k})) missing += (missing.empty() ? "" : ", ") + ("(" + m + ", " + d + ", " + k + ")");
      }
    }
  }
  if (!missing.empty()) throw ConfigError("incomplete stats grid; missing cells: " + missing);
  for (const auto& d : g.datasets) {
    for (const auto& k : g.metrics) {
      const Direction dir = g.at.at({g.models.front(), d, k})->direction;
      for (const auto& m : g.models) {
        if (g.at.at({m, d, k})->direction != dir) {
          throw ConfigError("mixed directions in cell (" + d + ", " + k + ")");
        }
      }
    }
  }
  return g;
}

const FoldStats& best_of(std::span<const FoldStats> cell, const std::vector<std::string>& order) {
  const FoldStats* best = &cell.front();
  for (const auto& s : cell.subspan(1)) {
    if (better(s.mu, best->mu, s.direction) ||
        (s.mu == best->mu && rank_of(s.model, order) < rank_of(best->model, order))) {
      best = &s;
    }
  }
  return *best;
}

}  // namespace

std::string_view to_string(Direction d) { return d == Direction::HigherBetter ? "higher_better" : "lower_better"; }

Direction parse_direction(std::string_view s) {
  if (s == "higher_better") return Direction::HigherBetter;
  if (s == "lower_better") return Direction::LowerBetter;
  throw ParseError("unknown direction '" + std::string(s) + "'");
}

FoldStats fold_stats(std::vector<double> values, std::string model, std::string dataset, std::string metric,
                     Direction direction) {
  const std::size_t k = values.size();
  if (k < 2) throw ConfigError("fold statistics need at least two folds, got " + std::to_string(k));
  const double mu = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(k);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  const double s = std::sqrt(ss / static_cast<double>(k - 1));
  FoldStats f{std::move(model), std::move(dataset), std::move(metric), direction, std::move(values), mu, 0.0};
  f.se = s / std::sqrt(static_cast<double>(k));
  return f;
}

FoldStats summary_stats(double mu, double se, std::string model, std::string dataset, std::string metric,
                        Direction direction) {
  if (!(se >= 0.0)) throw ConfigError("standard error must be non-negative");
  return FoldStats{std::move(model), std::move(dataset), std::move(metric), direction, {}, mu, se};
}

std::string one_se_select(std::span<const FoldStats> cell, const std::vector<std::string>& complexity_order,
                          const OneSeOptions& options) {
  if (cell.empty()) throw ConfigError("one_se_select: empty cell");
  for (const auto& s : cell) {
    if (s.dataset != cell.front().dataset || s.metric != cell.front().metric ||
        s.direction != cell.front().direction) {
      throw ConfigError("one_se_select: stats do not share dataset, metric and direction");
    }
  }
  const FoldStats& best = best_of(cell, complexity_order);
  const double lo = best.lo() - options.mean_tolerance;
  const double hi = best.hi() + options.mean_tolerance;
  const FoldStats* chosen = &best;
  for (const auto& s : cell) {
    if (s.mu >= lo && s.mu <= hi && rank_of(s.model, complexity_order) < rank_of(chosen->model, complexity_order)) {
      chosen = &s;
    }
  }
  return chosen->model;
}

std::map<std::string, double> unit_metric_weights() {
  return {{"acc_bi", 1.0}, {"auprc_w", 1.0}, {"mse", 1.0}, {"r2", 1.0}};
}

std::vector<std::string> default_complexity_order() { return {"MT-CR", "MT-HCR", "MT-HCCR", "MT-HCCAR"}; }

SelectionScores select_models(std::span<const FoldStats> grid, const std::vector<std::string>& order,
                              const std::map<std::string, double>& weights, const OneSeOptions& options) {
  const Grid g = index_grid(grid, order);
  SelectionScores out;
  out.models = g.models;
  out.datasets = g.datasets;
  out.metrics = g.metrics;
  for (const auto& m : g.models) {
    out.p_ab_total[m] = 0.0;
    out.p_1se_total[m] = 0.0;
  }
  for (const auto& k : g.metrics) {
    const auto it = weights.find(k);
    out.weights[k] = it == weights.end() ? 1.0 : it->second;
  }
  for (const auto& d : g.datasets) {
    for (const auto& k : g.metrics) {
      const auto cell = g.cell(d, k);
      const FoldStats& best = best_of(cell, order);
      if (best.mu == 0.0) throw UndefinedMetricError("best mean is 0 in cell (" + d + ", " + k + ")");
      const std::string chosen = one_se_select(cell, order, options);
      for (const auto& s : cell) {
        const double gap = (s.mu - best.mu) / best.mu;
        const double component = s.direction == Direction::HigherBetter ? gap : -gap;
        out.p_ab_components[{s.model, d, k}] = component;
        out.p_ab_total[s.model] += component;
        const int psi = s.model == chosen ? 1 : 0;
        out.psi[{s.model, d, k}] = psi;
        out.p_1se_total[s.model] += out.weights[k] * psi;
      }
    }
  }
  return out;
}

SelectionScores p_ab(std::span<const FoldStats> grid, const std::vector<std::string>& order) {
  SelectionScores s = select_models(grid, order);
  s.psi.clear();
  s.p_1se_total.clear();
  return s;
}

SelectionScores p_1se(std::span<const FoldStats> grid, const std::vector<std::string>& order,
                      const std::map<std::string, double>& weights, const OneSeOptions& options) {
  SelectionScores s = select_models(grid, order, weights, options);
  s.p_ab_components.clear();
  s.p_ab_total.clear();
  return s;
}

}  // namespace mthccar
