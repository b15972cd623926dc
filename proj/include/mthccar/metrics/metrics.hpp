#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mthccar/datasynth/dataset.hpp"

namespace mthccar {

/// Fraction of positions where the two mask decisions agree.
double acc_binary(const std::vector<bool>& truth, const std::vector<bool>& pred);

/// Step-integrated area under the precision-recall curve. Thresholds are the
/// distinct scores in descending order; tied scores enter together.
/// Throws UndefinedMetricError without positives.
double auprc_class(std::span<const double> scores, const std::vector<bool>& labels);

/// Micro-averaged AUPRC: TP/FP/FN are summed over all classes at each
/// pooled threshold before recall and precision are formed.
double auprc_weighted(const std::vector<std::vector<double>>& scores,
                      const std::vector<std::vector<bool>>& labels);

/// Mean of squared errors.
double mse(std::span<const double> y, std::span<const double> y_hat);
/// Coefficient of determination. Throws UndefinedMetricError for constant y.
double r2(std::span<const double> y, std::span<const double> y_hat);

struct FmgOptions {
  double eligibility_log10 = 0.7;  // pixels with y > cutoff only
  double liquid_threshold = 0.25;
  double ice_threshold = 0.35;
  bool linear_space = false;  // relative error on 10^y instead of y
};

struct FmgResult {
  std::optional<double> liquid;  // absent when no eligible liquid pixel
  std::optional<double> ice;
  std::size_t eligible_liquid = 0;
  std::size_t eligible_ice = 0;
  std::size_t met_liquid = 0;
  std::size_t met_ice = 0;
};

/// Fraction of eligible pixels per phase whose relative COT error
/// |(y - y_hat) / y| is below the phase threshold. Clear entries in `phase`
/// are ignored.
FmgResult fmg(std::span<const double> y, std::span<const double> y_hat, const std::vector<CloudLabel>& phase,
              const FmgOptions& options = {});

}  // namespace mthccar
