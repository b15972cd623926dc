#include "mthccar/architectures/checkpoint.hpp"

#include <fstream>

#include "mthccar/error.hpp"

namespace mthccar {
namespace {

using nlohmann::json;

json row_major(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m.data()[i]);
  return out;
}

Matrix from_row_major(const json& values, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  if (!values.is_array() || static_cast<Eigen::Index>(values.size()) != rows * cols) {
    throw ParseError(what + ": expected " + std::to_string(rows * cols) + " values");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = values[static_cast<std::size_t>(i)].get<double>();
  return m;
}

}  // namespace

json to_json(const TrainConfig& c) {
  json j{{"learning_rate", c.learning_rate},
         {"batch_size", c.batch_size},
         {"epochs", c.epochs},
         {"lasso_lambda", c.lasso_lambda},
         {"seed", c.seed}};
  j["grad_clip"] = c.grad_clip ? json(*c.grad_clip) : json(nullptr);
  return j;
}

TrainConfig train_config_from_json(const json& j, TrainConfig c) {
  try {
    if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<int>();
    if (j.contains("epochs")) c.epochs = j.at("epochs").get<int>();
    if (j.contains("lasso_lambda")) c.lasso_lambda = j.at("lasso_lambda").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("grad_clip")) {
      const auto& g = j.at("grad_clip");
      c.grad_clip = g.is_null() ? std::nullopt : std::optional<double>(g.get<double>());
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad training config: ") + e.what());
  }
  return c;
}

json checkpoint_json(const Model& model, const TrainConfig& config) {
  json params = json::array();
  for (std::size_t s = 0; s < model.stores.size(); ++s) {
    for (const auto& p : model.stores[s]) {
      params.push_back({{"name", p.name},
                        {"store", s},
                        {"rows", p.value.rows()},
                        {"cols", p.value.cols()},
                        {"values", row_major(p.value)}});
    }
  }
  json scaler = nullptr;
  if (model.scaler.fitted()) {
    scaler = {{"mean", row_major(model.scaler.mean)}, {"scale", row_major(model.scaler.scale)}};
  }
  return json{{"format_version", kCheckpointFormatVersion},
              {"architecture", to_json(model.spec)},
              {"config", to_json(config)},
              {"scaler", scaler},
              {"parameters", params}};
}

void save_checkpoint(const Model& model, const TrainConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out << checkpoint_json(model, config).dump(2) << '\n';
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

Checkpoint checkpoint_from_json(const json& j) {
  try {
    if (j.at("format_version").get<int>() != kCheckpointFormatVersion) {
      throw ParseError("unsupported checkpoint format_version");
    }
    const auto& arch = j.at("architecture");
    const ArchitectureSpec spec = spec_from_json(arch, arch.at("input_dim").get<int>());
    Checkpoint ck{build_model(spec, 0), train_config_from_json(j.at("config"))};

    std::size_t loaded = 0;
    for (const auto& p : j.at("parameters")) {
      const auto name = p.at("name").get<std::string>();
      const auto store = p.at("store").get<std::size_t>();
      if (store >= ck.model.stores.size() || !ck.model.stores[store].contains(name)) {
        throw ParseError("checkpoint parameter " + name + " does not belong to " +
                         std::string(to_string(spec.variant)));
      }
      Param& target = ck.model.stores[store].at(name);
      const auto rows = p.at("rows").get<Eigen::Index>();
      const auto cols = p.at("cols").get<Eigen::Index>();
      if (rows != target.value.rows() || cols != target.value.cols()) {
        throw ParseError("checkpoint parameter " + name + " has shape " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ", expected " + detail::shape_str(target.value.rows(), target.value.cols()));
      }
      target.value = from_row_major(p.at("values"), rows, cols, name);
      ++loaded;
    }
    std::size_t expected = 0;
    for (const auto& s : ck.model.stores) expected += s.size();
    if (loaded != expected) {
      throw ParseError("checkpoint has " + std::to_string(loaded) + " parameters, expected " +
                       std::to_string(expected));
    }

    const auto& scaler = j.at("scaler");
    if (!scaler.is_null()) {
      const Eigen::Index m = spec.input_dim;
      ck.model.scaler.mean = from_row_major(scaler.at("mean"), 1, m, "scaler.mean");
      ck.model.scaler.scale = from_row_major(scaler.at("scale"), 1, m, "scaler.scale");
    }
    return ck;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read checkpoint " + path.string());
  try {
    return checkpoint_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace mthccar
