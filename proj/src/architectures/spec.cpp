#include "mthccar/architectures/spec.hpp"

#include <string>

#include "mthccar/error.hpp"

namespace mthccar {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Seq:
      return "SEQ";
    case Variant::MtCr:
      return "MT-CR";
    case Variant::MtHcr:
      return "MT-HCR";
    case Variant::MtHccr:
      return "MT-HCCR";
    case Variant::MtHccar:
      return "MT-HCCAR";
    case Variant::MlpBaseline:
      return "MLP-BASELINE";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  for (Variant v : {Variant::Seq, Variant::MtCr, Variant::MtHcr, Variant::MtHccr, Variant::MtHccar,
                    Variant::MlpBaseline}) {
    if (to_string(v) == s) return v;
  }
  throw ConfigError("unknown variant '" + std::string(s) +
                    "' (expected SEQ, MT-CR, MT-HCR, MT-HCCR, MT-HCCAR or MLP-BASELINE)");
}

std::string_view to_string(GatingMode g) { return g == GatingMode::Soft ? "soft" : "hard"; }

GatingMode parse_gating_mode(std::string_view s) {
  if (s == "soft") return GatingMode::Soft;
  if (s == "hard") return GatingMode::Hard;
  throw ConfigError("unknown gating_mode '" + std::string(s) + "'");
}

ArchitectureSpec ArchitectureSpec::for_variant(Variant v, int input_dim) {
  ArchitectureSpec s;
  s.variant = v;
  s.input_dim = input_dim;
  s.hc_enabled = v == Variant::MtHcr || v == Variant::MtHccr || v == Variant::MtHccar;
  s.aux_enabled = v == Variant::MtHccr || v == Variant::MtHccar;
  s.attention_enabled = v == Variant::MtHccar;
  if (v == Variant::MlpBaseline) {
    s.encoder_widths.clear();
    s.latent_dim = 0;
    s.head_widths = {10};
  }
  return s;
}

ArchitectureSpec ArchitectureSpec::small(Variant v, int input_dim, int latent, int head) {
  ArchitectureSpec s = for_variant(v, input_dim);
  if (v != Variant::MlpBaseline) {
    s.encoder_widths = {2 * latent};
    s.latent_dim = latent;
    s.head_widths = {head};
  }
  return s;
}

bool ArchitectureSpec::has_decoder() const {
  return variant != Variant::Seq && variant != Variant::MlpBaseline;
}

void ArchitectureSpec::validate() const {
  const std::string name(to_string(variant));
  if (input_dim < 1) throw ConfigError(name + ": input_dim must be >= 1");
  if (head_widths.empty()) throw ConfigError(name + ": at least one head width is required");
  for (int w : head_widths) {
    if (w < 1) throw ConfigError(name + ": head widths must be >= 1");
  }
  if (variant == Variant::MlpBaseline) {
    if (!encoder_widths.empty() || head_widths.size() != 1) {
      throw ConfigError("MLP-BASELINE has exactly one hidden layer and no encoder");
    }
  } else {
    if (latent_dim < 1) throw ConfigError(name + ": latent_dim must be >= 1");
    int prev = -1;
    for (int w : encoder_widths) {
      if (w < 1) throw ConfigError(name + ": encoder widths must be >= 1");
      if (prev != -1 && w >= prev) throw ConfigError(name + ": encoder widths must strictly decrease");
      prev = w;
    }
    if (prev != -1 && latent_dim >= prev) {
      throw ConfigError(name + ": latent_dim must be narrower than the last encoder width");
    }
  }
  const bool want_hc = variant == Variant::MtHcr || variant == Variant::MtHccr || variant == Variant::MtHccar;
  const bool want_aux = variant == Variant::MtHccr || variant == Variant::MtHccar;
  const bool want_attn = variant == Variant::MtHccar;
  if (hc_enabled != want_hc || aux_enabled != want_aux || attention_enabled != want_attn) {
    throw ConfigError(name + ": hc/aux/attention flags inconsistent with the variant");
  }
  if (!(bins[0] < bins[1] && bins[1] < bins[2] && bins[2] < bins[3])) {
    throw ConfigError(name + ": bin edges must increase");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError(name + ": threshold must be in (0, 1)");
}

nlohmann::json to_json(const ArchitectureSpec& spec) {
  return nlohmann::json{
      {"variant", to_string(spec.variant)},
      {"input_dim", spec.input_dim},
      {"widths", {{"encoder", spec.encoder_widths}, {"heads", spec.head_widths}}},
      {"latent_dim", spec.latent_dim},
      {"gating_mode", to_string(spec.gating_mode)},
      {"bins", spec.bins},
      {"threshold", spec.threshold},
      {"cloudy_reduction", spec.cloudy_reduction == CloudyReduction::Sum ? "sum" : "mean"},
  };
}

ArchitectureSpec spec_from_json(const nlohmann::json& j, int input_dim) {
  try {
    const Variant v = parse_variant(j.at("variant").get<std::string>());
    ArchitectureSpec s = ArchitectureSpec::for_variant(v, j.value("input_dim", input_dim));
    if (input_dim > 0 && s.input_dim != input_dim) {
      throw ConfigError("configured input_dim " + std::to_string(s.input_dim) +
                        " does not match the data (" + std::to_string(input_dim) + " features)");
    }
    if (j.contains("widths")) {
      const auto& w = j.at("widths");
      if (w.contains("encoder")) s.encoder_widths = w.at("encoder").get<std::vector<int>>();
      if (w.contains("heads")) s.head_widths = w.at("heads").get<std::vector<int>>();
    }
    s.latent_dim = j.value("latent_dim", s.latent_dim);
    if (j.contains("gating_mode")) s.gating_mode = parse_gating_mode(j.at("gating_mode").get<std::string>());
    if (j.contains("bins")) s.bins = j.at("bins").get<std::array<double, 4>>();
    s.threshold = j.value("threshold", s.threshold);
    if (j.contains("cloudy_reduction")) {
      const auto r = j.at("cloudy_reduction").get<std::string>();
      if (r != "sum" && r != "mean") throw ConfigError("cloudy_reduction must be 'sum' or 'mean'");
      s.cloudy_reduction = r == "sum" ? CloudyReduction::Sum : CloudyReduction::Mean;
    }
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("architecture config: ") + e.what());
  }
}

}  // namespace mthccar
