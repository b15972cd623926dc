#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mthccar/datasynth/sensors.hpp"
#include "mthccar/gradcore/kernels.hpp"

namespace mthccar {

enum class SurfaceType { Land, Snow, Desert, Ocean };
enum class CloudLabel { Clear, Liquid, Ice };
enum class ThicknessBin { Thin, Moderate, Thick };

inline constexpr int kSurfaceTypeCount = 4;
inline constexpr double kCotMin = -1.5;
inline constexpr double kCotMax = 2.5;

std::string_view to_string(SurfaceType s);
std::string_view to_string(CloudLabel l);
SurfaceType parse_surface_type(std::string_view s);
CloudLabel parse_cloud_label(std::string_view s);

inline bool is_cloudy(CloudLabel l) { return l != CloudLabel::Clear; }

/// Per-pixel simulated observations plus hierarchical labels.
///
/// Feature layout (M = 10 + bands): surface pressure, water vapor, ozone,
/// four one-hot surface-type columns, reflectances in band order, then view
/// zenith, solar zenith and relative azimuth.
struct PixelDataset {
  SensorConfig sensor{SensorName::ABI, {}};
  std::vector<std::int64_t> pixel_id;
  std::vector<double> surface_pressure_mbar;
  std::vector<double> water_vapor_mm;
  std::vector<double> ozone_du;
  std::vector<SurfaceType> surface_type;
  Matrix reflectance;  // n x bands
  std::vector<double> view_zenith_deg;
  std::vector<double> solar_zenith_deg;
  std::vector<double> rel_azimuth_deg;
  std::vector<CloudLabel> label;
  // log10 cloud optical thickness; present exactly for cloudy pixels.
  std::vector<std::optional<double>> cot_log10;

  [[nodiscard]] std::size_t size() const { return label.size(); }
  [[nodiscard]] std::size_t feature_dim() const { return 10 + sensor.band_count(); }
  [[nodiscard]] Matrix features() const;
  [[nodiscard]] PixelDataset subset(std::span<const std::size_t> rows) const;

  /// Throws DataError describing the first violated invariant.
  void validate() const;
};

PixelDataset concat(const PixelDataset& a, const PixelDataset& b);

using BinEdges = std::array<double, 4>;
inline constexpr BinEdges kDefaultBinEdges{-1.5, 0.0, 1.0, 2.5};

/// Bin ownership is half-open [lo, hi) with the last bin closed.
ThicknessBin assign_thickness_bin(double cot_log10, const BinEdges& edges = kDefaultBinEdges);

/// Training targets in matrix form, rows aligned with the dataset.
struct Targets {
  Matrix cloud;     // n x 1, 1 for cloudy
  Matrix clear;     // n x 1
  Matrix liquid;    // n x 1
  Matrix ice;       // n x 1
  Matrix cot;       // n x 1, 0 on clear pixels
  Matrix bins;      // n x 3 one-hot thin/moderate/thick, zero rows on clear pixels
};

Targets make_targets(const PixelDataset& ds, const BinEdges& edges = kDefaultBinEdges);

/// Per-feature z-score statistics fitted on a training set.
struct FeatureScaler {
  Matrix mean;   // 1 x M
  Matrix scale;  // 1 x M, standard deviation (1 for constant columns)

  [[nodiscard]] bool fitted() const { return mean.size() > 0; }
  static FeatureScaler fit(const Matrix& x);
  [[nodiscard]] Matrix transform(const Matrix& x) const;
};

}  // namespace mthccar
