#pragma once

#include <vector>

#include "mthccar/architectures/model.hpp"
#include "mthccar/datasynth/dataset.hpp"

namespace mthccar {

/// Composite training loss, split into its parts.
///
///   l_hc  = l_cmask + l_cphase
///   l_car = l_reg + l_caux
///   total = l_hc + l_car + l_rec + l_lasso
struct LossBreakdown {
  double l_cmask = 0.0;
  double l_cphase = 0.0;
  double l_hc = 0.0;
  double l_reg = 0.0;
  double l_caux = 0.0;
  double l_car = 0.0;
  double l_rec = 0.0;
  double l_lasso = 0.0;
  double total = 0.0;
};

struct LossVars {
  Var l_cmask, l_cphase, l_hc, l_reg, l_caux, l_car, l_rec, l_lasso, total;
};

/// Records the loss on the forward pass's tape.
///
/// * l_cmask: binary cross entropy of the mask pair, averaged over pixels.
/// * l_cphase: with hierarchical classification, the mask-weighted form
///   -(1/N) sum u_C [l_CL log(u_C u_CL) + l_CI log(u_C u_CI)]; otherwise plain
///   BCE of the phase pair. Clear pixels contribute nothing.
/// * l_reg: sum (or mean, per spec.cloudy_reduction) of |y - y_hat| over
///   truly cloudy pixels.
/// * l_caux: cross entropy of the thickness bins over truly cloudy pixels,
///   reduced like l_reg.
/// * l_rec: mean squared reconstruction error over all n x M entries.
/// * l_lasso: lambda * sum |w| over every weight matrix (biases excluded).
///
/// Probabilities entering a log are clamped to [1e-7, 1 - 1e-7].
LossVars build_loss(Tape& tape, const ArchitectureSpec& spec, const ForwardVars& fwd,
                    const Targets& targets, const std::vector<Var>& weights, double lambda);

/// Reads the recorded values; throws NumericError naming the first
/// non-finite component.
LossBreakdown read_breakdown(const LossVars& vars);

/// Weight-matrix Vars of every store, for the L1 term.
std::vector<Var> weight_vars(const Model& model, const ParamLookup& param);

/// Loss of already computed outputs (no gradients).
LossBreakdown compute_loss(const ModelOutputs& outputs, const Targets& targets, const Model& model,
                           double lambda);

}  // namespace mthccar
