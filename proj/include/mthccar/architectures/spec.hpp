#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mthccar {

enum class Variant { Seq, MtCr, MtHcr, MtHccr, MtHccar, MlpBaseline };

/// How the phase branch is gated by the cloud mask during training.
/// Inference always uses the thresholded (hard) mask.
enum class GatingMode { Soft, Hard };

/// Whether the regression and auxiliary losses sum or average over the
/// cloudy pixels of a batch.
enum class CloudyReduction { Sum, Mean };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);
std::string_view to_string(GatingMode g);
GatingMode parse_gating_mode(std::string_view s);

/// Variants in increasing complexity, as used by model selection.
inline constexpr std::array<Variant, 4> kMultiTaskVariants = {Variant::MtCr, Variant::MtHcr,
                                                              Variant::MtHccr, Variant::MtHccar};

struct ArchitectureSpec {
  Variant variant = Variant::MtHccar;
  int input_dim = 0;
  // Encoder hidden widths before the latent layer; the decoder mirrors them.
  std::vector<int> encoder_widths{128, 64};
  int latent_dim = 32;
  // Hidden widths of every task head. The last one is also the attention width.
  std::vector<int> head_widths{16};
  bool attention_enabled = true;
  bool aux_enabled = true;
  bool hc_enabled = true;
  GatingMode gating_mode = GatingMode::Soft;
  std::array<double, 4> bins{-1.5, 0.0, 1.0, 2.5};
  double threshold = 0.5;
  CloudyReduction cloudy_reduction = CloudyReduction::Sum;

  /// Spec with the default widths and the flags implied by `v`.
  static ArchitectureSpec for_variant(Variant v, int input_dim);
  /// Desk-scale widths used for gradient checks: latent `latent`, heads `head`.
  static ArchitectureSpec small(Variant v, int input_dim, int latent, int head);

  [[nodiscard]] bool has_decoder() const;
  [[nodiscard]] int attention_dim() const { return head_widths.back(); }

  /// Throws ConfigError on inconsistent widths or variant flags.
  void validate() const;
};

nlohmann::json to_json(const ArchitectureSpec& spec);
ArchitectureSpec spec_from_json(const nlohmann::json& j, int input_dim);

}  // namespace mthccar
