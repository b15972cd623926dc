#pragma once

#include <optional>
#include <vector>

#include "mthccar/architectures/model.hpp"

namespace mthccar {

struct Predictions {
  std::vector<CloudLabel> label_hat;
  // Present exactly where cloud_hat is true.
  std::vector<std::optional<double>> cot_hat;
  std::vector<bool> cloud_hat;
};

/// Turns uncertainties into labels. Hierarchical variants (and SEQ) call a
/// pixel cloudy when u_cloud >= threshold, then liquid when
/// u_liquid >= u_ice. Flat variants take the argmax over
/// (u_cloud, u_clear, u_liquid, u_ice) and call the pixel cloudy unless the
/// argmax is clear.
Predictions predictions_from_outputs(const ModelOutputs& outputs, const ArchitectureSpec& spec);

Predictions predict(const Model& model, const Matrix& x_raw);

}  // namespace mthccar
