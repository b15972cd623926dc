#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mthccar/gradcore/kernels.hpp"

namespace mthccar {

struct Param {
  std::string name;
  Matrix value;
  Matrix grad;
  // Weight matrices take part in the L1 penalty; biases do not.
  bool is_weight = true;
};

/// Named trainable arrays of one network. Names are unique and grad always
/// has the shape of value.
class ParamStore {
 public:
  Param& add(std::string name, Matrix value, bool is_weight);

  /// Glorot-uniform weight (fan_in x fan_out) plus zero bias row.
  void add_dense(const std::string& prefix, Eigen::Index fan_in, Eigen::Index fan_out,
                 std::uint64_t& rng_state);
  /// Square Glorot-uniform matrix without bias.
  void add_square(const std::string& name, Eigen::Index dim, std::uint64_t& rng_state);

  [[nodiscard]] bool contains(std::string_view name) const;
  [[nodiscard]] Param& at(std::string_view name);
  [[nodiscard]] const Param& at(std::string_view name) const;

  void zero_grad();
  [[nodiscard]] std::size_t size() const { return params_.size(); }
  [[nodiscard]] std::size_t scalar_count() const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

 private:
  std::vector<Param> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace mthccar
