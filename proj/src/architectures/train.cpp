#include "mthccar/architectures/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mthccar/datasynth/splits.hpp"
#include "mthccar/error.hpp"

namespace mthccar {

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = m.row(static_cast<Eigen::Index>(rows[k]));
  }
  return out;
}

Targets gather_rows(const Targets& t, std::span<const std::size_t> rows) {
  return Targets{gather_rows(t.cloud, rows),  gather_rows(t.clear, rows), gather_rows(t.liquid, rows),
                 gather_rows(t.ice, rows),    gather_rows(t.cot, rows),   gather_rows(t.bins, rows)};
}

namespace {

void add_into(LossBreakdown& acc, const LossBreakdown& b) {
  acc.l_cmask += b.l_cmask;
  acc.l_cphase += b.l_cphase;
  acc.l_hc += b.l_hc;
  acc.l_reg += b.l_reg;
  acc.l_caux += b.l_caux;
  acc.l_car += b.l_car;
  acc.l_rec += b.l_rec;
  acc.l_lasso += b.l_lasso;
  acc.total += b.total;
}

LossBreakdown scaled(LossBreakdown b, double s) {
  for (double* f : {&b.l_cmask, &b.l_cphase, &b.l_hc, &b.l_reg, &b.l_caux, &b.l_car, &b.l_rec,
                    &b.l_lasso, &b.total}) {
    *f *= s;
  }
  return b;
}

std::vector<std::vector<std::size_t>> batches_of(std::vector<std::size_t> order, int batch_size) {
  std::vector<std::vector<std::size_t>> out;
  const auto bs = static_cast<std::size_t>(batch_size);
  for (std::size_t start = 0; start < order.size(); start += bs) {
    const std::size_t end = std::min(order.size(), start + bs);
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

struct PreparedSet {
  Matrix x;  // standardized
  Targets targets;
};

PreparedSet prepare(const Model& model, const PixelDataset& ds) {
  return {model.scaler.transform(ds.features()), make_targets(ds, model.spec.bins)};
}

LossBreakdown batched_loss(const Model& model, const PreparedSet& set, int batch_size, double lambda) {
  const auto n = static_cast<std::size_t>(set.x.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batches = batches_of(std::move(order), batch_size);
  LossBreakdown acc;
  for (const auto& b : batches) {
    Tape tape;
    const auto lookup = constant_lookup(tape, model);
    const auto fwd = build_forward(tape, model.spec, lookup, gather_rows(set.x, b), true);
    add_into(acc, read_breakdown(
                      build_loss(tape, model.spec, fwd, gather_rows(set.targets, b),
                                 weight_vars(model, lookup), lambda)));
  }
  return scaled(acc, 1.0 / static_cast<double>(batches.size()));
}

}  // namespace

LossBreakdown evaluate_loss(const Model& model, const PixelDataset& ds, int batch_size, double lambda) {
  if (ds.size() == 0) throw ConfigError("cannot evaluate the loss of an empty dataset");
  return batched_loss(model, prepare(model, ds), batch_size, lambda);
}

TrainResult train(Model& model, const PixelDataset& train_set, const PixelDataset& val_set,
                  const TrainConfig& config) {
  config.validate();
  if (train_set.size() == 0) throw ConfigError("training set is empty");
  if (train_set.feature_dim() != static_cast<std::size_t>(model.spec.input_dim)) {
    throw ConfigError("dataset has " + std::to_string(train_set.feature_dim()) +
                      " features but the model expects " + std::to_string(model.spec.input_dim));
  }
  TrainResult result;
  if (config.epochs == 0) return result;

  if (!model.scaler.fitted()) model.scaler = FeatureScaler::fit(train_set.features());
  const PreparedSet tr = prepare(model, train_set);
  const bool has_val = val_set.size() > 0;
  const PreparedSet va = has_val ? prepare(model, val_set) : PreparedSet{};

  // SEQ trains one store per stage; every other variant has a single stage.
  const std::size_t stages = model.stores.size();
  int epoch_number = 0;
  for (std::size_t stage = 0; stage < stages; ++stage) {
    std::vector<bool> trainable(stages, false);
    trainable[stage] = true;
    AdamState adam;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      ++epoch_number;
      const std::uint64_t shuffle_seed =
          config.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(epoch_number);
      const auto batches = batches_of(permutation(train_set.size(), shuffle_seed), config.batch_size);

      LossBreakdown acc;
      for (const auto& b : batches) {
        Tape tape;
        const auto lookup = tracked_lookup(tape, model, trainable);
        const auto fwd = build_forward(tape, model.spec, lookup, gather_rows(tr.x, b), true);
        const auto loss = build_loss(tape, model.spec, fwd, gather_rows(tr.targets, b),
                                     weight_vars(model, lookup), config.lasso_lambda);
        add_into(acc, read_breakdown(loss));
        tape.backward(loss.total);
        optimizer_step(model.stores[stage], config, adam);
        model.stores[stage].zero_grad();
      }

      EpochRecord rec;
      rec.epoch = epoch_number;
      rec.train = scaled(acc, 1.0 / static_cast<double>(batches.size()));
      rec.val_total = has_val ? batched_loss(model, va, config.batch_size, config.lasso_lambda).total
                              : std::numeric_limits<double>::quiet_NaN();
      result.history.push_back(rec);
    }
  }
  return result;
}

}  // namespace mthccar
