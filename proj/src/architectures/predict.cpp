#include "mthccar/architectures/predict.hpp"

namespace mthccar {

Predictions predictions_from_outputs(const ModelOutputs& o, const ArchitectureSpec& spec) {
  const auto n = static_cast<std::size_t>(o.u_cloud.size());
  const bool flat = spec.variant == Variant::MtCr || spec.variant == Variant::MlpBaseline;
  Predictions p;
  p.label_hat.reserve(n);
  p.cot_hat.reserve(n);
  p.cloud_hat.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    bool cloudy = false;
    if (flat) {
      const double scores[4] = {o.u_cloud(i), o.u_clear(i), o.u_liquid(i), o.u_ice(i)};
      int arg = 0;
      for (int c = 1; c < 4; ++c) {
        if (scores[c] > scores[arg]) arg = c;
      }
      cloudy = arg != 1;
    } else {
      cloudy = o.u_cloud(i) >= spec.threshold;
    }
    p.cloud_hat.push_back(cloudy);
    if (!cloudy) {
      p.label_hat.push_back(CloudLabel::Clear);
      p.cot_hat.emplace_back(std::nullopt);
    } else {
      p.label_hat.push_back(o.u_liquid(i) >= o.u_ice(i) ? CloudLabel::Liquid : CloudLabel::Ice);
      p.cot_hat.emplace_back(o.y_cot_hat(i));
    }
  }
  return p;
}

Predictions predict(const Model& model, const Matrix& x_raw) {
  return predictions_from_outputs(forward(model, x_raw, /*train_mode=*/false), model.spec);
}

}  // namespace mthccar
