#pragma once

#include <cstdint>

#include "mthccar/datasynth/dataset.hpp"

namespace mthccar {

struct LabelPriors {
  double p_clear = 0.4;
  double p_liquid = 0.3;
  double p_ice = 0.3;
};

struct GeneratorConfig {
  std::size_t n = 1000;
  LabelPriors priors;
  double noise_sd = 0.01;
  std::uint64_t seed = 0;
};

/// Noise-free top-of-atmosphere reflectance of the toy forward model for one
/// band. `cot_log10` is ignored for clear pixels.
///
///   R = g(sza) * [ f * A(lambda, phase, wv) + (1 - f) * a_s(surface, lambda) * T(lambda, wv) ]
///       + rayleigh(lambda, pressure, sza)
///
/// with cloud cover response f = 1 / (1 + exp(-1.6 * (cot_log10 + 0.2))),
/// f = 0 for clear pixels, g = 0.55 + 0.45 * cos(sza) * (1 - 0.1 * cos(raz) * sin(vza)).
/// A is the asymptotic cloud-top brightness: flat in the visible and
/// decreasing into the SWIR, where ice absorbs more than liquid; inside
/// the 1.38 um water-vapour band low (liquid) cloud tops are attenuated by
/// the overlying vapour while high (ice) tops are not.
double toy_reflectance(CloudLabel label, double cot_log10, SurfaceType surface, double band_nm,
                       double water_vapor_mm, double ozone_du, double surface_pressure_mbar,
                       double view_zenith_deg, double solar_zenith_deg, double rel_azimuth_deg);

/// Samples a dataset from the toy forward model. Fully determined by
/// (config, sensor). Invalid priors raise ConfigError.
PixelDataset generate_dataset(const GeneratorConfig& config, const SensorConfig& sensor);

}  // namespace mthccar
