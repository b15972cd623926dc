#include "mthccar/gradcore/optimizer.hpp"

#include <cmath>

namespace mthccar {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(lasso_lambda >= 0.0)) throw ConfigError("lasso_lambda must be >= 0");
  if (grad_clip && !(*grad_clip > 0.0)) throw ConfigError("grad_clip must be > 0");
}

double grad_norm(const ParamStore& store) {
  double sq = 0.0;
  for (const auto& p : store) sq += p.grad.squaredNorm();
  return std::sqrt(sq);
}

void optimizer_step(ParamStore& store, const TrainConfig& config, AdamState& state) {
  for (const auto& p : store) {
    if (!p.grad.allFinite()) throw NumericError("non-finite gradient in parameter " + p.name);
  }

  double clip_scale = 1.0;
  if (config.grad_clip) {
    const double norm = grad_norm(store);
    if (norm > *config.grad_clip) clip_scale = *config.grad_clip / norm;
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);

  for (auto& p : store) {
    auto [mit, m_new] = state.m.try_emplace(p.name, Matrix::Zero(p.value.rows(), p.value.cols()));
    auto [vit, v_new] = state.v.try_emplace(p.name, Matrix::Zero(p.value.rows(), p.value.cols()));
    Matrix& m = mit->second;
    Matrix& v = vit->second;
    const Matrix g = p.grad * clip_scale;

    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseAbs2();
    p.value.array() -= config.learning_rate * (m.array() / bc1) /
                       ((v.array() / bc2).sqrt() + state.eps);
  }
}

}  // namespace mthccar
