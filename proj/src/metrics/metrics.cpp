#include "mthccar/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mthccar/error.hpp"

namespace mthccar {
namespace {

void require_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(a) + " vs " + std::to_string(b));
  }
  if (a == 0) throw DimensionError(std::string(what) + ": empty input");
}

}  // namespace

double acc_binary(const std::vector<bool>& truth, const std::vector<bool>& pred) {
  require_lengths(truth.size(), pred.size(), "acc_binary");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == pred[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double auprc_class(std::span<const double> scores, const std::vector<bool>& labels) {
  require_lengths(scores.size(), labels.size(), "auprc_class");
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  if (positives == 0) throw UndefinedMetricError("auprc_class: no positive labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double area = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double h = scores[order[k]];
    for (; k < order.size() && scores[order[k]] == h; ++k) (labels[order[k]] ? tp : fp)++;
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return area;
}

double auprc_weighted(const std::vector<std::vector<double>>& scores,
                      const std::vector<std::vector<bool>>& labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw DimensionError("auprc_weighted: need matching, nonempty score and label lists");
  }
  // Pooling the per-class triples and sweeping one threshold over the pool
  // sums TP, FP and FN across classes at every threshold.
  std::vector<double> pooled_scores;
  std::vector<bool> pooled_labels;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    require_lengths(scores[c].size(), labels[c].size(), "auprc_weighted");
    pooled_scores.insert(pooled_scores.end(), scores[c].begin(), scores[c].end());
    pooled_labels.insert(pooled_labels.end(), labels[c].begin(), labels[c].end());
  }
  if (std::none_of(pooled_labels.begin(), pooled_labels.end(), [](bool b) { return b; })) {
    throw UndefinedMetricError("auprc_weighted: no positive labels in any class");
  }
  return auprc_class(pooled_scores, pooled_labels);
}

double mse(std::span<const double> y, std::span<const double> y_hat) {
  require_lengths(y.size(), y_hat.size(), "mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
  return acc / static_cast<double>(y.size());
}

double r2(std::span<const double> y, std::span<const double> y_hat) {
  require_lengths(y.size(), y_hat.size(), "r2");
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (ss_tot == 0.0) throw UndefinedMetricError("r2: constant targets");
  return 1.0 - ss_res / ss_tot;
}

FmgResult fmg(std::span<const double> y, std::span<const double> y_hat, const std::vector<CloudLabel>& phase,
              const FmgOptions& options) {
  require_lengths(y.size(), y_hat.size(), "fmg");
  require_lengths(y.size(), phase.size(), "fmg");
  FmgResult r;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (phase[i] == CloudLabel::Clear || !(y[i] > options.eligibility_log10)) continue;
    const double truth = options.linear_space ? std::pow(10.0, y[i]) : y[i];
    const double est = options.linear_space ? std::pow(10.0, y_hat[i]) : y_hat[i];
    const double err = std::abs((truth - est) / truth);
    if (phase[i] == CloudLabel::Liquid) {
      ++r.eligible_liquid;
      r.met_liquid += err < options.liquid_threshold ? 1 : 0;
    } else {
      ++r.eligible_ice;
      r.met_ice += err < options.ice_threshold ? 1 : 0;
    }
  }
  if (r.eligible_liquid > 0) r.liquid = static_cast<double>(r.met_liquid) / static_cast<double>(r.eligible_liquid);
  if (r.eligible_ice > 0) r.ice = static_cast<double>(r.met_ice) / static_cast<double>(r.eligible_ice);
  return r;
}

}  // namespace mthccar
