#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mthccar {

enum class SensorName { OCI, VIIRS, ABI };

struct SensorConfig {
  SensorName name;
  std::vector<double> band_centers_nm;

  [[nodiscard]] std::size_t band_count() const { return band_centers_nm.size(); }
};

/// Band-center registry for the three supported imagers.
SensorConfig sensor_band_config(SensorName name);
/// Case-insensitive lookup by name; unknown names raise ConfigError.
SensorConfig sensor_band_config(std::string_view name);

SensorName parse_sensor_name(std::string_view name);
std::string_view to_string(SensorName name);

}  // namespace mthccar
