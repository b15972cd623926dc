#include "mthccar/datasynth/sensors.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "mthccar/error.hpp"

namespace mthccar {

namespace {

constexpr int kOciHyperspectralBands = 226;
constexpr double kOciHyperFirstNm = 350.0;
constexpr double kOciHyperLastNm = 890.0;

std::vector<double> oci_centers() {
  // 226 hyperspectral centers spanning 350..890 nm inclusive. The nominal
  // spacing is 2.5 nm; an exact 2.5 nm grid over that span has only 217
  // points, so the grid is stretched evenly (2.4 nm) to keep both the band
  // count and the end points.
  std::vector<double> c;
  c.reserve(kOciHyperspectralBands + 7);
  const double step = (kOciHyperLastNm - kOciHyperFirstNm) / (kOciHyperspectralBands - 1);
  for (int i = 0; i < kOciHyperspectralBands; ++i) {
    c.push_back(i + 1 == kOciHyperspectralBands ? kOciHyperLastNm : kOciHyperFirstNm + step * i);
  }
  for (double nir_swir : {940.0, 1040.0, 1250.0, 1378.0, 1620.0, 2130.0, 2260.0}) c.push_back(nir_swir);
  return c;
}

}  // namespace

SensorConfig sensor_band_config(SensorName name) {
  switch (name) {
    case SensorName::OCI:
      return SensorConfig{name, oci_centers()};
    case SensorName::VIIRS:
      return SensorConfig{name, {412, 445, 488, 555, 672, 865, 1240, 1380, 1610, 2250}};
    case SensorName::ABI:
      return SensorConfig{name, {471, 640, 860, 1370, 1600, 2200}};
  }
  throw ConfigError("unknown sensor");
}

SensorConfig sensor_band_config(std::string_view name) {
  return sensor_band_config(parse_sensor_name(name));
}

SensorName parse_sensor_name(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (up == "OCI") return SensorName::OCI;
  if (up == "VIIRS") return SensorName::VIIRS;
  if (up == "ABI") return SensorName::ABI;
  throw ConfigError("unknown sensor '" + std::string(name) + "' (expected OCI, VIIRS or ABI)");
}

std::string_view to_string(SensorName name) {
  switch (name) {
    case SensorName::OCI:
      return "OCI";
    case SensorName::VIIRS:
      return "VIIRS";
    case SensorName::ABI:
      return "ABI";
  }
  return "?";
}

}  // namespace mthccar
