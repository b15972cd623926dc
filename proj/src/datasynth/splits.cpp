#include "mthccar/datasynth/splits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mthccar/error.hpp"

namespace mthccar {

void SplitPlan::validate() const {
  for (double f : {train_frac, val_frac, test_frac}) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("split fractions must lie in [0, 1]");
  }
  if (train_frac + val_frac + test_frac > 1.0 + 1e-12) {
    throw ConfigError("split fractions must sum to at most 1");
  }
}

std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

SplitIndices split(std::size_t n, const SplitPlan& plan) {
  plan.validate();
  const auto count = [n](double frac) {
    return static_cast<std::size_t>(std::floor(frac * static_cast<double>(n) + 1e-9));
  };
  const std::size_t n_train = count(plan.train_frac);
  const std::size_t n_val = std::min(count(plan.val_frac), n - n_train);
  const std::size_t n_test = std::min(count(plan.test_frac), n - n_train - n_val);

  const auto perm = permutation(n, plan.seed);
  SplitIndices out;
  auto it = perm.begin();
  out.train.assign(it, it + static_cast<std::ptrdiff_t>(n_train));
  it += static_cast<std::ptrdiff_t>(n_train);
  out.val.assign(it, it + static_cast<std::ptrdiff_t>(n_val));
  it += static_cast<std::ptrdiff_t>(n_val);
  out.test.assign(it, it + static_cast<std::ptrdiff_t>(n_test));
  it += static_cast<std::ptrdiff_t>(n_test);
  out.unassigned.assign(it, perm.end());
  return out;
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("K must be >= 2");
  if (k > n) throw ConfigError("K (" + std::to_string(k) + ") exceeds n (" + std::to_string(n) + ")");
  const auto perm = permutation(n, seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

}  // namespace mthccar
