#include "mthccar/gradcore/param_store.hpp"

#include <cmath>
#include <random>

namespace mthccar {

Param& ParamStore::add(std::string name, Matrix value, bool is_weight) {
  if (index_.contains(name)) throw ConfigError("duplicate parameter name: " + name);
  index_.emplace(name, params_.size());
  Matrix grad = Matrix::Zero(value.rows(), value.cols());
  params_.push_back(Param{std::move(name), std::move(value), std::move(grad), is_weight});
  return params_.back();
}

namespace {

Matrix glorot(Eigen::Index fan_in, Eigen::Index fan_out, std::uint64_t& rng_state) {
  // Each matrix draws from its own engine seeded from a running counter so
  // that adding a layer does not perturb earlier layers' initial values.
  std::mt19937_64 engine(rng_state++);
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix w(fan_in, fan_out);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(engine);
  return w;
}

}  // namespace

void ParamStore::add_dense(const std::string& prefix, Eigen::Index fan_in, Eigen::Index fan_out,
                           std::uint64_t& rng_state) {
  add(prefix + ".w", glorot(fan_in, fan_out, rng_state), true);
  add(prefix + ".b", Matrix::Zero(1, fan_out), false);
}

void ParamStore::add_square(const std::string& name, Eigen::Index dim, std::uint64_t& rng_state) {
  add(name, glorot(dim, dim, rng_state), true);
}

bool ParamStore::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

Param& ParamStore::at(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw ConfigError("unknown parameter: " + std::string(name));
  return params_[it->second];
}

const Param& ParamStore::at(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw ConfigError("unknown parameter: " + std::string(name));
  return params_[it->second];
}

void ParamStore::zero_grad() {
  for (auto& p : params_) p.grad.setZero();
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

}  // namespace mthccar
