#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "mthccar/gradcore/param_store.hpp"

namespace mthccar {

struct FiniteDiffOptions {
  double step = 1e-5;
  double tol = 1e-4;
  // Entries sampled per parameter; every entry is checked when the parameter
  // is at most this large.
  int max_entries_per_param = 24;
  std::uint64_t seed = 0;
  // One-sided slopes differing by more than this fraction of their scale
  // mark a non-differentiable point; such entries are skipped.
  double kink_tol = 1e-2;
};

struct FiniteDiffReport {
  double max_rel_err = 0.0;
  bool pass = true;
  int checked = 0;
  int skipped = 0;
  std::string worst_entry;
};

/// Compares the analytic gradients already stored in `store` against central
/// differences (f(w+h) - f(w-h)) / 2h of `loss_fn`. Relative error uses the
/// denominator max(|analytic|, |numeric|, 1e-8).
FiniteDiffReport finite_diff_check(const std::function<double(const ParamStore&)>& loss_fn,
                                   const ParamStore& store, const FiniteDiffOptions& options = {});

}  // namespace mthccar
