#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "mthccar/architectures/spec.hpp"
#include "mthccar/datasynth/dataset.hpp"
#include "mthccar/gradcore/param_store.hpp"
#include "mthccar/gradcore/tape.hpp"

namespace mthccar {

/// One model instance: its spec, the parameter stores of its independently
/// trained networks (three for SEQ, one otherwise) and the feature scaler.
struct Model {
  ArchitectureSpec spec;
  std::vector<ParamStore> stores;
  FeatureScaler scaler;

  [[nodiscard]] std::size_t parameter_count() const;
  [[nodiscard]] const Param& param(std::string_view name) const;
  [[nodiscard]] Param& param(std::string_view name);
};

/// Allocates and initializes every parameter of the variant. Identical
/// (spec, seed) pairs give bitwise-identical parameters.
Model build_model(const ArchitectureSpec& spec, std::uint64_t seed);

/// Maps a parameter name to the Var standing for it on the current tape.
using ParamLookup = std::function<Var(std::string_view)>;

/// Every parameter becomes a gradient-tracked leaf, except those of stores
/// whose `trainable` flag is false (empty = all trainable).
ParamLookup tracked_lookup(Tape& tape, Model& model, const std::vector<bool>& trainable = {});
/// Every parameter becomes a constant.
ParamLookup constant_lookup(Tape& tape, const Model& model);

/// Vars of one recorded forward pass. Optional heads are left unbound
/// (Var::valid() == false) when the variant lacks them.
struct ForwardVars {
  Var x;        // standardized input
  Var x_recon;  // decoder output
  Var u_cloud, u_clear, u_liquid, u_ice;  // n x 1 each
  Var u_bins;   // n x 3 thin / moderate / thick
  Var y_cot;    // n x 1
};

/// Records the forward graph on `tape`. `x` must already be standardized.
/// In train_mode with soft gating the phase branch sees the latent features
/// scaled by u_cloud; otherwise it sees them multiplied by the 0/1 mask
/// decision u_cloud >= threshold.
ForwardVars build_forward(Tape& tape, const ArchitectureSpec& spec, const ParamLookup& param,
                          const Matrix& x, bool train_mode);

struct ModelOutputs {
  Vector u_cloud, u_clear, u_liquid, u_ice;
  Matrix u_bins;  // empty when the variant has no auxiliary classifier
  Vector y_cot_hat;
  Matrix x_input;  // standardized input the model saw
  Matrix x_recon;  // empty when the variant has no decoder
};

ModelOutputs read_outputs(const ForwardVars& vars);

/// Standardizes `x_raw` with the model's scaler and runs the forward pass.
ModelOutputs forward(const Model& model, const Matrix& x_raw, bool train_mode);

}  // namespace mthccar
