#include "mthccar/architectures/model.hpp"

#include <string>

#include "mthccar/error.hpp"
#include "mthccar/gradcore/ops.hpp"

namespace mthccar {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Dense stack "<prefix><k>" for k = 0.. over the given widths.
int add_stack(ParamStore& s, const std::string& prefix, int in, const std::vector<int>& widths,
              std::uint64_t& rng) {
  for (std::size_t k = 0; k < widths.size(); ++k) {
    s.add_dense(prefix + std::to_string(k), in, widths[k], rng);
    in = widths[k];
  }
  return in;
}

std::vector<int> encoder_layers(const ArchitectureSpec& spec) {
  std::vector<int> w = spec.encoder_widths;
  w.push_back(spec.latent_dim);
  return w;
}

std::vector<int> decoder_layers(const ArchitectureSpec& spec) {
  std::vector<int> w(spec.encoder_widths.rbegin(), spec.encoder_widths.rend());
  w.push_back(spec.input_dim);
  return w;
}

// Head "<name>.h<k>" hidden layers followed by "<name>.out".
void add_head(ParamStore& s, const std::string& name, int in, const std::vector<int>& hidden, int out,
              std::uint64_t& rng) {
  in = add_stack(s, name + ".h", in, hidden, rng);
  s.add_dense(name + ".out", in, out, rng);
}

Var dense_layer(const ParamLookup& param, const std::string& name, const Var& h) {
  return ops::dense(h, param(name + ".w"), param(name + ".b"));
}

// Applies layers "<prefix>0..count-1"; ReLU after each except optionally the last.
Var run_stack(const ParamLookup& param, const std::string& prefix, std::size_t count, Var h,
              bool relu_last = true) {
  for (std::size_t k = 0; k < count; ++k) {
    h = dense_layer(param, prefix + std::to_string(k), h);
    if (relu_last || k + 1 < count) h = ops::relu(h);
  }
  return h;
}

// Returns the last hidden activation of head `name`.
Var run_head_hidden(const ParamLookup& param, const std::string& name, std::size_t hidden, Var h) {
  return run_stack(param, name + ".h", hidden, h);
}

Var hard_gate(Tape& tape, const Var& u_cloud, double threshold) {
  Matrix g = (u_cloud.value().array() >= threshold).cast<double>().matrix();
  return tape.constant(std::move(g));
}

void complementary_pair(const Var& logit, Var& positive, Var& negative) {
  positive = ops::sigmoid(logit);
  negative = ops::sigmoid(ops::scale(logit, -1.0));
}

}  // namespace

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& s : stores) n += s.scalar_count();
  return n;
}

const Param& Model::param(std::string_view name) const {
  for (const auto& s : stores) {
    if (s.contains(name)) return s.at(name);
  }
  throw ConfigError("unknown parameter: " + std::string(name));
}

Param& Model::param(std::string_view name) {
  for (auto& s : stores) {
    if (s.contains(name)) return s.at(name);
  }
  throw ConfigError("unknown parameter: " + std::string(name));
}

Model build_model(const ArchitectureSpec& spec, std::uint64_t seed) {
  spec.validate();
  Model m;
  m.spec = spec;
  std::uint64_t rng = splitmix64(seed);
  const int M = spec.input_dim;
  const int L = spec.latent_dim;
  const auto& heads = spec.head_widths;

  switch (spec.variant) {
    case Variant::Seq: {
      for (const char* net : {"mask_net.", "phase_net.", "reg_net."}) {
        ParamStore s;
        const int in = add_stack(s, std::string(net) + "enc", M, encoder_layers(spec), rng);
        add_head(s, std::string(net) + "head", in, heads, 1, rng);
        m.stores.push_back(std::move(s));
      }
      break;
    }
    case Variant::MlpBaseline: {
      ParamStore s;
      add_head(s, "mlp", M, heads, 3, rng);
      m.stores.push_back(std::move(s));
      break;
    }
    default: {
      ParamStore s;
      add_stack(s, "enc", M, encoder_layers(spec), rng);
      add_stack(s, "dec", L, decoder_layers(spec), rng);
      if (spec.hc_enabled) {
        add_head(s, "mask", L, heads, 1, rng);
        add_head(s, "phase", L, heads, 1, rng);
      } else {
        add_head(s, "cls", L, heads, 2, rng);
      }
      if (spec.aux_enabled) add_head(s, "aux", L, heads, 3, rng);
      add_head(s, "reg", L, heads, 1, rng);
      if (spec.attention_enabled) {
        const int d = spec.attention_dim();
        for (const char* w : {"attn.wq", "attn.wk", "attn.wv", "attn.wz"}) s.add_square(w, d, rng);
      }
      m.stores.push_back(std::move(s));
      break;
    }
  }
  return m;
}

ParamLookup tracked_lookup(Tape& tape, Model& model, const std::vector<bool>& trainable) {
  return [&tape, &model, trainable](std::string_view name) {
    for (std::size_t k = 0; k < model.stores.size(); ++k) {
      auto& s = model.stores[k];
      if (!s.contains(name)) continue;
      const bool track = trainable.empty() || trainable[k];
      return track ? tape.parameter(s.at(name)) : tape.constant(s.at(name).value);
    }
    throw ConfigError("unknown parameter: " + std::string(name));
  };
}

ParamLookup constant_lookup(Tape& tape, const Model& model) {
  return [&tape, &model](std::string_view name) { return tape.constant(model.param(name).value); };
}

ForwardVars build_forward(Tape& tape, const ArchitectureSpec& spec, const ParamLookup& param,
                          const Matrix& x, bool train_mode) {
  if (x.cols() != spec.input_dim) {
    throw DimensionError("model expects " + std::to_string(spec.input_dim) + " features, got " +
                         std::to_string(x.cols()));
  }
  ForwardVars out;
  out.x = tape.constant(x);
  const std::size_t n_enc = spec.encoder_widths.size() + 1;
  const std::size_t n_head = spec.head_widths.size();

  if (spec.variant == Variant::Seq) {
    auto net = [&](const std::string& prefix, const Var& in) {
      Var h = run_stack(param, prefix + "enc", n_enc, in);
      h = run_head_hidden(param, prefix + "head", n_head, h);
      return dense_layer(param, prefix + "head.out", h);
    };
    complementary_pair(net("mask_net.", out.x), out.u_cloud, out.u_clear);
    // The phase network consumes the mask network's thresholded decision.
    const Var gated = ops::row_gate(out.x, hard_gate(tape, out.u_cloud, spec.threshold));
    complementary_pair(net("phase_net.", gated), out.u_liquid, out.u_ice);
    out.y_cot = net("reg_net.", out.x);
    return out;
  }

  if (spec.variant == Variant::MlpBaseline) {
    const Var h = run_head_hidden(param, "mlp", n_head, out.x);
    const Var o = dense_layer(param, "mlp.out", h);
    complementary_pair(ops::column(o, 0), out.u_cloud, out.u_clear);
    complementary_pair(ops::column(o, 1), out.u_liquid, out.u_ice);
    out.y_cot = ops::column(o, 2);
    return out;
  }

  const Var z = run_stack(param, "enc", n_enc, out.x);
  out.x_recon = run_stack(param, "dec", spec.encoder_widths.size() + 1, z, /*relu_last=*/false);

  if (spec.hc_enabled) {
    const Var mask_h = run_head_hidden(param, "mask", n_head, z);
    complementary_pair(dense_layer(param, "mask.out", mask_h), out.u_cloud, out.u_clear);
    const bool soft = train_mode && spec.gating_mode == GatingMode::Soft;
    const Var gate = soft ? out.u_cloud : hard_gate(tape, out.u_cloud, spec.threshold);
    const Var phase_h = run_head_hidden(param, "phase", n_head, ops::row_gate(z, gate));
    complementary_pair(dense_layer(param, "phase.out", phase_h), out.u_liquid, out.u_ice);
  } else {
    const Var cls_h = run_head_hidden(param, "cls", n_head, z);
    const Var logits = dense_layer(param, "cls.out", cls_h);
    complementary_pair(ops::column(logits, 0), out.u_cloud, out.u_clear);
    complementary_pair(ops::column(logits, 1), out.u_liquid, out.u_ice);
  }

  Var theta2;
  if (spec.aux_enabled) {
    theta2 = run_head_hidden(param, "aux", n_head, z);
    out.u_bins = ops::softmax_rows(dense_layer(param, "aux.out", theta2));
  }
  Var theta1 = run_head_hidden(param, "reg", n_head, z);
  if (spec.attention_enabled) {
    theta1 = ops::cross_attention(theta1, theta2, param("attn.wq"), param("attn.wk"), param("attn.wv"),
                                  param("attn.wz"));
  }
  out.y_cot = dense_layer(param, "reg.out", theta1);
  return out;
}

ModelOutputs read_outputs(const ForwardVars& v) {
  ModelOutputs o;
  o.u_cloud = v.u_cloud.value().col(0);
  o.u_clear = v.u_clear.value().col(0);
  o.u_liquid = v.u_liquid.value().col(0);
  o.u_ice = v.u_ice.value().col(0);
  if (v.u_bins.valid()) o.u_bins = v.u_bins.value();
  o.y_cot_hat = v.y_cot.value().col(0);
  o.x_input = v.x.value();
  if (v.x_recon.valid()) o.x_recon = v.x_recon.value();
  return o;
}

ModelOutputs forward(const Model& model, const Matrix& x_raw, bool train_mode) {
  Tape tape;
  const auto vars = build_forward(tape, model.spec, constant_lookup(tape, model),
                                  model.scaler.transform(x_raw), train_mode);
  return read_outputs(vars);
}

}  // namespace mthccar
