#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

#include "mthccar/gradcore/param_store.hpp"

namespace mthccar {

struct TrainConfig {
  double learning_rate = 1e-5;
  int batch_size = 64;
  int epochs = 500;
  double lasso_lambda = 1e-5;
  std::uint64_t seed = 0;
  std::optional<double> grad_clip;

  void validate() const;
};

/// Adam moments for one ParamStore, keyed by parameter name.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step = 0;
  std::unordered_map<std::string, Matrix> m;
  std::unordered_map<std::string, Matrix> v;
};

/// Global L2 norm of all gradients in the store.
double grad_norm(const ParamStore& store);

/// One bias-corrected Adam update using the gradients currently in `store`.
/// Gradients are rescaled to `config.grad_clip` global norm first when set.
/// Throws NumericError naming the first parameter with a non-finite grad.
void optimizer_step(ParamStore& store, const TrainConfig& config, AdamState& state);

}  // namespace mthccar
