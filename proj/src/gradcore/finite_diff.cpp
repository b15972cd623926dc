#include "mthccar/gradcore/finite_diff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace mthccar {

FiniteDiffReport finite_diff_check(const std::function<double(const ParamStore&)>& loss_fn,
                                   const ParamStore& store, const FiniteDiffOptions& options) {
  if (!(options.step > 0.0)) throw ConfigError("finite difference step must be > 0");

  ParamStore work = store;
  const double f0 = loss_fn(work);
  if (loss_fn(work) != f0) throw DeterminismError("loss function is not deterministic");

  FiniteDiffReport report;
  std::mt19937_64 rng(options.seed);
  const double h = options.step;

  for (auto& p : work) {
    const auto n = static_cast<std::size_t>(p.value.size());
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (n > static_cast<std::size_t>(options.max_entries_per_param)) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(static_cast<std::size_t>(options.max_entries_per_param));
    }
    const Matrix& analytic_grad = store.at(p.name).grad;

    for (std::size_t k : idx) {
      double& w = p.value.data()[k];
      const double w0 = w;
      w = w0 + h;
      const double fp = loss_fn(work);
      w = w0 - h;
      const double fm = loss_fn(work);
      w = w0;

      const double fwd = (fp - f0) / h;
      const double bwd = (f0 - fm) / h;
      const double slope_scale = std::max({std::abs(fwd), std::abs(bwd), 1.0});
      if (std::abs(fwd - bwd) > options.kink_tol * slope_scale) {
        ++report.skipped;
        continue;
      }

      const double numeric = (fp - fm) / (2.0 * h);
      const double analytic = analytic_grad.data()[k];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      const double rel = std::abs(analytic - numeric) / denom;
      ++report.checked;
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst_entry = p.name + "[" + std::to_string(k) + "]";
      }
    }
  }
  report.pass = report.max_rel_err <= options.tol;
  return report;
}

}  // namespace mthccar
