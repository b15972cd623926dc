#include "mthccar/datasynth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mthccar/error.hpp"

namespace mthccar {
namespace {

double ramp(double x, double x0, double x1) { return std::clamp((x - x0) / (x1 - x0), 0.0, 1.0); }

double surface_albedo(SurfaceType s, double nm) {
  switch (s) {
    case SurfaceType::Land:
      // dark visible, red edge near 700 nm, slow decline through the SWIR
      return 0.05 + 0.25 * ramp(nm, 680, 760) - 0.12 * ramp(nm, 1000, 2300);
    case SurfaceType::Snow:
      return 0.95 - 0.85 * ramp(nm, 900, 1600) - 0.05 * ramp(nm, 1600, 2300);
    case SurfaceType::Desert:
      return 0.15 + 0.25 * ramp(nm, 400, 2200);
    case SurfaceType::Ocean:
      return 0.06 - 0.04 * ramp(nm, 400, 700) - 0.01 * ramp(nm, 700, 900);
  }
  return 0.0;
}

// Column water-vapour absorption coefficient (per mm) for a band.
double vapour_coefficient(double nm) {
  if (std::abs(nm - 1375.0) <= 30.0) return 0.12;
  if (std::abs(nm - 940.0) <= 20.0) return 0.02;
  return 0.001;
}

double cloud_brightness(CloudLabel label, double nm, double water_vapor_mm) {
  const bool ice = label == CloudLabel::Ice;
  if (std::abs(nm - 1375.0) <= 30.0) {
    // Ice tops sit above nearly all the vapour; liquid tops sit below half of it.
    return ice ? 0.55 : 0.55 * std::exp(-0.5 * vapour_coefficient(nm) * water_vapor_mm);
  }
  const double swir = ramp(nm, 900, 2200);
  return ice ? 0.82 - 0.60 * swir : 0.85 - 0.42 * swir;
}

}  // namespace

double toy_reflectance(CloudLabel label, double cot_log10, SurfaceType surface, double band_nm,
                       double water_vapor_mm, double ozone_du, double surface_pressure_mbar,
                       double view_zenith_deg, double solar_zenith_deg, double rel_azimuth_deg) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double mu0 = std::cos(solar_zenith_deg * deg);
  const double geometry =
      0.55 + 0.45 * mu0 * (1.0 - 0.1 * std::cos(rel_azimuth_deg * deg) * std::sin(view_zenith_deg * deg));

  const double cover = is_cloudy(label) ? 1.0 / (1.0 + std::exp(-1.6 * (cot_log10 + 0.2))) : 0.0;
  const double vapour_t = std::exp(-vapour_coefficient(band_nm) * water_vapor_mm);
  const double ozone_t =
      std::exp(-0.03 * (ozone_du / 300.0) * std::exp(-std::pow((band_nm - 600.0) / 80.0, 2)));
  const double surface_term = (1.0 - cover) * surface_albedo(surface, band_nm) * vapour_t;
  const double cloud_term = cover * cloud_brightness(label, band_nm, water_vapor_mm);
  const double rayleigh =
      0.06 * std::pow(450.0 / band_nm, 4) * (surface_pressure_mbar / 1013.25) / (0.5 + mu0);
  return geometry * ozone_t * (cloud_term + surface_term) + rayleigh;
}

PixelDataset generate_dataset(const GeneratorConfig& config, const SensorConfig& sensor) {
  const LabelPriors& p = config.priors;
  if (!(p.p_clear >= 0 && p.p_liquid >= 0 && p.p_ice >= 0) ||
      std::abs(p.p_clear + p.p_liquid + p.p_ice - 1.0) > 1e-9) {
    throw ConfigError("label priors must be non-negative and sum to 1");
  }
  if (config.n < 1) throw ConfigError("n must be >= 1");
  if (!(config.noise_sd >= 0.0)) throw ConfigError("noise_sd must be >= 0");

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  PixelDataset ds;
  ds.sensor = sensor;
  const std::size_t n = config.n;
  const auto bands = static_cast<Eigen::Index>(sensor.band_count());
  ds.reflectance.resize(static_cast<Eigen::Index>(n), bands);

  for (std::size_t i = 0; i < n; ++i) {
    const double u_label = unit(rng);
    CloudLabel label = CloudLabel::Ice;
    if (u_label < p.p_clear) {
      label = CloudLabel::Clear;
    } else if (u_label < p.p_clear + p.p_liquid) {
      label = CloudLabel::Liquid;
    }
    std::optional<double> cot;
    if (is_cloudy(label)) cot = uniform(kCotMin, kCotMax);

    const double u_surface = unit(rng);
    SurfaceType surface = SurfaceType::Ocean;
    if (u_surface < 0.30) {
      surface = SurfaceType::Land;
    } else if (u_surface < 0.45) {
      surface = SurfaceType::Snow;
    } else if (u_surface < 0.60) {
      surface = SurfaceType::Desert;
    }

    const double pressure = uniform(700.0, 1050.0);
    const double vapour = uniform(1.0, 60.0);
    const double ozone = uniform(220.0, 450.0);
    const double vza = uniform(0.0, 70.0);
    const double sza = uniform(0.0, 75.0);
    const double raz = uniform(0.0, 180.0);

    ds.pixel_id.push_back(static_cast<std::int64_t>(i));
    ds.surface_pressure_mbar.push_back(pressure);
    ds.water_vapor_mm.push_back(vapour);
    ds.ozone_du.push_back(ozone);
    ds.surface_type.push_back(surface);
    ds.view_zenith_deg.push_back(vza);
    ds.solar_zenith_deg.push_back(sza);
    ds.rel_azimuth_deg.push_back(raz);
    ds.label.push_back(label);
    ds.cot_log10.push_back(cot);

    const auto r = static_cast<Eigen::Index>(i);
    for (Eigen::Index b = 0; b < bands; ++b) {
      const double clean =
          toy_reflectance(label, cot.value_or(0.0), surface, sensor.band_centers_nm[static_cast<std::size_t>(b)],
                          vapour, ozone, pressure, vza, sza, raz);
      const double eps = config.noise_sd > 0.0 ? config.noise_sd * noise(rng) : 0.0;
      ds.reflectance(r, b) = std::clamp(clean + eps, 0.0, 1.5);
    }
  }
  return ds;
}

}  // namespace mthccar
