#include "mthccar/architectures/loss.hpp"

#include <cmath>
#include <string>

#include "mthccar/error.hpp"
#include "mthccar/gradcore/ops.hpp"

namespace mthccar {
namespace {

Var zero(Tape& tape) { return tape.constant(Matrix::Zero(1, 1)); }

Var safe_log(const Var& p) { return ops::log(ops::clamp(p, kProbEps, 1.0 - kProbEps)); }

void require_rows(const Matrix& m, Eigen::Index n, const char* what) {
  if (m.rows() != n) {
    throw DimensionError(std::string(what) + " has " + std::to_string(m.rows()) + " rows, expected " +
                         std::to_string(n));
  }
}

}  // namespace

LossVars build_loss(Tape& tape, const ArchitectureSpec& spec, const ForwardVars& fwd,
                    const Targets& targets, const std::vector<Var>& weights, double lambda) {
  const Eigen::Index n = fwd.u_cloud.rows();
  if (n == 0) throw DimensionError("loss of an empty batch");
  require_rows(targets.cloud, n, "targets");
  require_rows(targets.bins, n, "bin targets");
  const double inv_n = 1.0 / static_cast<double>(n);

  const Var l_c = tape.constant(targets.cloud);
  const Var l_clear = tape.constant(targets.clear);
  const Var l_cl = tape.constant(targets.liquid);
  const Var l_ci = tape.constant(targets.ice);

  LossVars L;
  L.l_cmask = ops::scale(
      ops::sum(ops::add(ops::mul(l_c, safe_log(fwd.u_cloud)), ops::mul(l_clear, safe_log(fwd.u_clear)))),
      -inv_n);

  if (spec.hc_enabled) {
    const Var uc = ops::clamp(fwd.u_cloud, kProbEps, 1.0 - kProbEps);
    const Var ucl = ops::clamp(fwd.u_liquid, kProbEps, 1.0 - kProbEps);
    const Var uci = ops::clamp(fwd.u_ice, kProbEps, 1.0 - kProbEps);
    const Var liquid = ops::mul(ops::mul(uc, l_cl), ops::log(ops::mul(uc, ucl)));
    const Var ice = ops::mul(ops::mul(uc, l_ci), ops::log(ops::mul(uc, uci)));
    L.l_cphase = ops::scale(ops::sum(ops::add(liquid, ice)), -inv_n);
  } else {
    L.l_cphase = ops::scale(
        ops::sum(ops::add(ops::mul(l_cl, safe_log(fwd.u_liquid)), ops::mul(l_ci, safe_log(fwd.u_ice)))),
        -inv_n);
  }
  L.l_hc = ops::add(L.l_cmask, L.l_cphase);

  const double n_cloudy = targets.cloud.sum();
  const double cloudy_scale =
      spec.cloudy_reduction == CloudyReduction::Mean && n_cloudy > 0 ? 1.0 / n_cloudy : 1.0;
  L.l_reg = ops::scale(
      ops::sum(ops::mul(l_c, ops::abs(ops::sub(tape.constant(targets.cot), fwd.y_cot)))), cloudy_scale);

  if (fwd.u_bins.valid()) {
    // Bin targets are all-zero rows on clear pixels, which masks them out.
    L.l_caux = ops::scale(ops::sum(ops::mul(tape.constant(targets.bins), safe_log(fwd.u_bins))),
                          -cloudy_scale);
  } else {
    L.l_caux = zero(tape);
  }
  L.l_car = ops::add(L.l_reg, L.l_caux);

  if (fwd.x_recon.valid()) {
    L.l_rec = ops::mean(ops::square(ops::sub(fwd.x, fwd.x_recon)));
  } else {
    L.l_rec = zero(tape);
  }

  if (weights.empty() || lambda == 0.0) {
    L.l_lasso = zero(tape);
  } else {
    Var acc = ops::sum(ops::abs(weights.front()));
    for (std::size_t k = 1; k < weights.size(); ++k) acc = ops::add(acc, ops::sum(ops::abs(weights[k])));
    L.l_lasso = ops::scale(acc, lambda);
  }

  L.total = ops::add(ops::add(L.l_hc, L.l_car), ops::add(L.l_rec, L.l_lasso));
  return L;
}

LossBreakdown read_breakdown(const LossVars& v) {
  LossBreakdown b;
  const std::pair<const char*, std::pair<const Var*, double*>> parts[] = {
      {"l_cmask", {&v.l_cmask, &b.l_cmask}}, {"l_cphase", {&v.l_cphase, &b.l_cphase}},
      {"l_hc", {&v.l_hc, &b.l_hc}},          {"l_reg", {&v.l_reg, &b.l_reg}},
      {"l_caux", {&v.l_caux, &b.l_caux}},    {"l_car", {&v.l_car, &b.l_car}},
      {"l_rec", {&v.l_rec, &b.l_rec}},       {"l_lasso", {&v.l_lasso, &b.l_lasso}},
      {"total", {&v.total, &b.total}},
  };
  for (const auto& [name, slot] : parts) {
    const double value = slot.first->scalar();
    if (!std::isfinite(value)) throw NumericError(std::string("non-finite loss component ") + name);
    *slot.second = value;
  }
  return b;
}

std::vector<Var> weight_vars(const Model& model, const ParamLookup& param) {
  std::vector<Var> out;
  for (const auto& store : model.stores) {
    for (const auto& p : store) {
      if (p.is_weight) out.push_back(param(p.name));
    }
  }
  return out;
}

LossBreakdown compute_loss(const ModelOutputs& outputs, const Targets& targets, const Model& model,
                           double lambda) {
  Tape tape;
  ForwardVars fwd;
  auto col = [&tape](const Vector& v) { return tape.constant(Matrix(v)); };
  fwd.x = tape.constant(outputs.x_input);
  if (outputs.x_recon.size() > 0) fwd.x_recon = tape.constant(outputs.x_recon);
  fwd.u_cloud = col(outputs.u_cloud);
  fwd.u_clear = col(outputs.u_clear);
  fwd.u_liquid = col(outputs.u_liquid);
  fwd.u_ice = col(outputs.u_ice);
  if (outputs.u_bins.size() > 0) fwd.u_bins = tape.constant(outputs.u_bins);
  fwd.y_cot = col(outputs.y_cot_hat);
  const auto weights = weight_vars(model, constant_lookup(tape, model));
  return read_breakdown(build_loss(tape, model.spec, fwd, targets, weights, lambda));
}

}  // namespace mthccar
