#pragma once

#include <span>
#include <vector>

#include "mthccar/architectures/loss.hpp"
#include "mthccar/architectures/model.hpp"
#include "mthccar/gradcore/optimizer.hpp"

namespace mthccar {

struct EpochRecord {
  int epoch = 0;           // 1-based; SEQ numbers its three stages consecutively
  LossBreakdown train;     // mean of the epoch's mini-batch losses
  double val_total = 0.0;  // mean batch total loss on the validation set, NaN if none
};

struct TrainResult {
  std::vector<EpochRecord> history;
};

/// Mini-batch training with seeded per-epoch shuffling and Adam. The feature
/// scaler is fitted on `train_set` when the model does not carry one yet.
/// Returns the final-epoch parameters in `model` (no early stopping). SEQ
/// trains its mask, phase and regression networks one after the other, each
/// for `config.epochs` epochs, with the earlier networks frozen.
TrainResult train(Model& model, const PixelDataset& train_set, const PixelDataset& val_set,
                  const TrainConfig& config);

/// Batch-averaged loss of `ds` under the model (train-mode forward pass).
LossBreakdown evaluate_loss(const Model& model, const PixelDataset& ds, int batch_size, double lambda);

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows);
Targets gather_rows(const Targets& t, std::span<const std::size_t> rows);

}  // namespace mthccar
