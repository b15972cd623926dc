#pragma once

#include <cstdint>
#include <vector>

namespace mthccar {

struct SplitPlan {
  double train_frac = 0.625;
  double val_frac = 0.225;
  double test_frac = 0.10;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Row indices of each partition. Fractions may leave a remainder, which is
/// reported in `unassigned` rather than folded into another partition.
struct SplitIndices {
  std::vector<std::size_t> train, val, test, unassigned;
};

/// Seeded permutation of [0, n) sliced contiguously by fraction
/// (sizes floor(frac * n)).
SplitIndices split(std::size_t n, const SplitPlan& plan);

/// K disjoint test folds covering [0, n); the first n % K folds hold one
/// extra index.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

/// Seeded Fisher-Yates permutation of [0, n).
std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed);

}  // namespace mthccar
