#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "mthccar/architectures/model.hpp"
#include "mthccar/architectures/predict.hpp"
#include "mthccar/metrics/metrics.hpp"

namespace mthccar {

/// Test-set scores of one model. A field is empty when its metric is
/// undefined on the given pixels (no positives, constant targets, ...).
struct EvalReport {
  std::string variant;
  std::size_t n = 0;
  std::size_t n_cloudy = 0;
  double acc_bi = 0.0;
  std::map<std::string, std::optional<double>> auprc_per_class;  // cloudy, clear, liquid, ice
  std::optional<double> auprc_weighted;
  std::optional<double> mse_all, mse_liquid, mse_ice;
  std::optional<double> r2_all, r2_liquid, r2_ice;
  FmgResult fmg;
};

struct EvalOptions {
  FmgOptions fmg;
};

/// Per-class scores fed to the PR curves. Hierarchical variants score
/// liquid/ice as u_cloud * u_phase; flat variants use u_phase directly.
struct ClassScores {
  Vector cloudy, clear, liquid, ice;
};
ClassScores class_scores(const ModelOutputs& outputs, const ArchitectureSpec& spec);

/// Regression metrics use the truly cloudy pixels (liquid/ice subsets for
/// the per-phase fields) and the raw regression output.
EvalReport evaluate(const Model& model, const PixelDataset& ds, const EvalOptions& options = {});
EvalReport evaluate_outputs(const ModelOutputs& outputs, const ArchitectureSpec& spec, const PixelDataset& ds,
                            const EvalOptions& options = {});

nlohmann::json to_json(const EvalReport& r);

/// Column names and values of the flat CSV form, in matching order.
std::vector<std::string> eval_csv_columns();
std::vector<std::optional<double>> eval_csv_values(const EvalReport& r);

}  // namespace mthccar
