#pragma once

// Helpers shared by the unit tests and the acceptance binary: brute-force
// metric oracles written without reference to the library implementation,
// and a whole-model finite-difference harness.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "mthccar/architectures/loss.hpp"
#include "mthccar/architectures/model.hpp"
#include "mthccar/datasynth/generator.hpp"
#include "mthccar/gradcore/finite_diff.hpp"

namespace oracle {

// Precision/recall step area by enumerating every candidate threshold and
// recounting the confusion matrix from scratch.
inline double auprc(const std::vector<double>& scores, const std::vector<bool>& labels) {
  std::set<double, std::greater<>> thresholds(scores.begin(), scores.end());
  double positives = 0;
  for (bool b : labels) positives += b ? 1 : 0;
  double area = 0.0;
  double prev_recall = 0.0;
  for (double h : thresholds) {
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= h) (labels[i] ? tp : fp) += 1;
    }
    const double recall = tp / positives;
    area += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
  }
  return area;
}

// Micro-averaged form: per threshold, TP/FP/FN are summed class by class.
inline double auprc_micro(const std::vector<std::vector<double>>& scores,
                          const std::vector<std::vector<bool>>& labels) {
  std::set<double, std::greater<>> thresholds;
  for (const auto& s : scores) thresholds.insert(s.begin(), s.end());
  double area = 0.0;
  double prev_recall = 0.0;
  for (double h : thresholds) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t c = 0; c < scores.size(); ++c) {
      for (std::size_t i = 0; i < scores[c].size(); ++i) {
        const bool predicted = scores[c][i] >= h;
        if (predicted && labels[c][i]) tp += 1;
        if (predicted && !labels[c][i]) fp += 1;
        if (!predicted && labels[c][i]) fn += 1;
      }
    }
    const double recall = tp / (tp + fn);
    area += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
  }
  return area;
}

inline double mse(const std::vector<double>& y, const std::vector<double>& yh) {
  double s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::pow(y[i] - yh[i], 2);
  return s / static_cast<double>(y.size());
}

inline double r2(const std::vector<double>& y, const std::vector<double>& yh) {
  double mean = 0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    num += std::pow(y[i] - yh[i], 2);
    den += std::pow(y[i] - mean, 2);
  }
  return 1.0 - num / den;
}

// Returns {liquid fraction or -1, ice fraction or -1}.
inline std::pair<double, double> fmg(const std::vector<double>& y, const std::vector<double>& yh,
                                     const std::vector<int>& phase /* 1 liquid, 2 ice */) {
  double met[3] = {0, 0, 0}, total[3] = {0, 0, 0};
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] <= 0.7) continue;
    const double err = std::abs((y[i] - yh[i]) / y[i]);
    const double limit = phase[i] == 1 ? 0.25 : 0.35;
    total[phase[i]] += 1;
    if (err < limit) met[phase[i]] += 1;
  }
  return {total[1] > 0 ? met[1] / total[1] : -1.0, total[2] > 0 ? met[2] / total[2] : -1.0};
}

}  // namespace oracle

namespace support {

inline mthccar::PixelDataset toy_data(std::size_t n, std::uint64_t seed, double noise_sd = 0.01) {
  mthccar::GeneratorConfig g;
  g.n = n;
  g.seed = seed;
  g.noise_sd = noise_sd;
  return mthccar::generate_dataset(g, mthccar::sensor_band_config(mthccar::SensorName::ABI));
}

// Full composite loss of a batch as a function of one store's parameters.
inline double batch_loss(const mthccar::Model& model, const mthccar::Matrix& x, const mthccar::Targets& t,
                         double lambda) {
  mthccar::Tape tape;
  const auto lookup = mthccar::constant_lookup(tape, model);
  const auto fwd = mthccar::build_forward(tape, model.spec, lookup, x, /*train_mode=*/true);
  return mthccar::build_loss(tape, model.spec, fwd, t, mthccar::weight_vars(model, lookup), lambda)
      .total.scalar();
}

// Back-propagates the composite loss once and compares every store against
// central differences. Returns the worst report.
inline mthccar::FiniteDiffReport model_gradient_check(mthccar::Model& model, const mthccar::Matrix& x,
                                                      const mthccar::Targets& t, double lambda,
                                                      const mthccar::FiniteDiffOptions& opts = {}) {
  for (auto& s : model.stores) s.zero_grad();
  {
    mthccar::Tape tape;
    const auto lookup = mthccar::tracked_lookup(tape, model);
    const auto fwd = mthccar::build_forward(tape, model.spec, lookup, x, true);
    const auto loss = mthccar::build_loss(tape, model.spec, fwd, t, mthccar::weight_vars(model, lookup), lambda);
    tape.backward(loss.total);
  }
  mthccar::FiniteDiffReport worst;
  worst.pass = true;
  for (std::size_t k = 0; k < model.stores.size(); ++k) {
    auto fn = [&](const mthccar::ParamStore& s) {
      mthccar::Model probe = model;
      probe.stores[k] = s;
      return batch_loss(probe, x, t, lambda);
    };
    const auto r = mthccar::finite_diff_check(fn, model.stores[k], opts);
    worst.checked += r.checked;
    worst.skipped += r.skipped;
    worst.pass = worst.pass && r.pass;
    if (r.max_rel_err >= worst.max_rel_err) {
      worst.max_rel_err = r.max_rel_err;
      worst.worst_entry = r.worst_entry;
    }
  }
  return worst;
}

}  // namespace support
