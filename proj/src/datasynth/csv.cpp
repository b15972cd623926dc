#include "mthccar/datasynth/csv.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "mthccar/error.hpp"
#include "mthccar/text_io.hpp"

namespace mthccar {
namespace {

constexpr std::string_view kLeading[] = {"pixel_id",         "surface_pressure_mbar", "water_vapor_mm",
                                         "ozone_du",         "surface_type",          "view_zenith_deg",
                                         "solar_zenith_deg", "rel_azimuth_deg"};
constexpr std::size_t kLeadingCount = std::size(kLeading);

std::string band_column(double center) { return "refl_" + format_double(center); }

}  // namespace

void save_csv(const PixelDataset& ds, std::ostream& out) {
  ds.validate();
  for (std::size_t k = 0; k < kLeadingCount; ++k) out << (k ? "," : "") << kLeading[k];
  for (double c : ds.sensor.band_centers_nm) out << ',' << band_column(c);
  out << ",label,cot_log10\n";

  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.pixel_id[i] << ',' << format_double(ds.surface_pressure_mbar[i]) << ','
        << format_double(ds.water_vapor_mm[i]) << ',' << format_double(ds.ozone_du[i]) << ','
        << to_string(ds.surface_type[i]) << ',' << format_double(ds.view_zenith_deg[i]) << ','
        << format_double(ds.solar_zenith_deg[i]) << ',' << format_double(ds.rel_azimuth_deg[i]);
    for (Eigen::Index b = 0; b < ds.reflectance.cols(); ++b) {
      out << ',' << format_double(ds.reflectance(static_cast<Eigen::Index>(i), b));
    }
    out << ',' << to_string(ds.label[i]) << ',';
    if (ds.cot_log10[i]) out << format_double(*ds.cot_log10[i]);
    out << '\n';
  }
}

void save_csv(const PixelDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  save_csv(ds, out);
  if (!out) throw Error("write to " + path.string() + " failed");
}

PixelDataset load_csv(std::istream& in, std::optional<SensorName> expected) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty dataset file (missing header)");
  const auto header = split_csv_line(line);

  for (std::size_t k = 0; k < kLeadingCount; ++k) {
    if (k >= header.size() || header[k] != kLeading[k]) {
      throw ParseError("missing column '" + std::string(kLeading[k]) + "' at header position " +
                       std::to_string(k));
    }
  }
  if (header.size() < kLeadingCount + 2 || header[header.size() - 2] != "label" ||
      header.back() != "cot_log10") {
    throw ParseError("header must end with columns 'label,cot_log10'");
  }
  std::vector<double> centers;
  for (std::size_t k = kLeadingCount; k + 2 < header.size(); ++k) {
    const std::string_view col = header[k];
    if (!col.starts_with("refl_")) throw ParseError("unexpected column '" + std::string(col) + "'");
    auto c = parse_double(col.substr(5));
    if (!c) throw ParseError("bad band center in column '" + std::string(col) + "'");
    centers.push_back(*c);
  }

  PixelDataset ds;
  if (expected) {
    ds.sensor = sensor_band_config(*expected);
    if (ds.sensor.band_count() != centers.size()) {
      throw ParseError("band-count mismatch: sensor " + std::string(to_string(*expected)) + " has " +
                       std::to_string(ds.sensor.band_count()) + " bands but the file has " +
                       std::to_string(centers.size()) + " reflectance columns");
    }
    for (std::size_t b = 0; b < centers.size(); ++b) {
      if (band_column(centers[b]) != band_column(ds.sensor.band_centers_nm[b])) {
        throw ParseError("band center mismatch in column refl_" + format_double(centers[b]));
      }
    }
  } else {
    bool found = false;
    for (SensorName s : {SensorName::OCI, SensorName::VIIRS, SensorName::ABI}) {
      SensorConfig cfg = sensor_band_config(s);
      if (cfg.band_count() != centers.size()) continue;
      bool same = true;
      for (std::size_t b = 0; b < centers.size() && same; ++b) {
        same = band_column(centers[b]) == band_column(cfg.band_centers_nm[b]);
      }
      if (same) {
        ds.sensor = std::move(cfg);
        found = true;
        break;
      }
    }
    if (!found) {
      throw ParseError("reflectance columns (" + std::to_string(centers.size()) +
                       " bands) match no known sensor");
    }
  }

  const std::size_t bands = centers.size();
  const std::size_t width = header.size();
  std::vector<double> refl;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const std::string where = " at data row " + std::to_string(row);
    if (cells.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " cells, found " +
                       std::to_string(cells.size()) + where);
    }
    auto number = [&](std::size_t k) {
      auto v = parse_double(cells[k]);
      if (!v) {
        throw ParseError("non-numeric value '" + std::string(cells[k]) + "' in column '" +
                         std::string(header[k]) + "'" + where);
      }
      return *v;
    };
    try {
      ds.pixel_id.push_back(static_cast<std::int64_t>(number(0)));
      ds.surface_pressure_mbar.push_back(number(1));
      ds.water_vapor_mm.push_back(number(2));
      ds.ozone_du.push_back(number(3));
      ds.surface_type.push_back(parse_surface_type(cells[4]));
      ds.view_zenith_deg.push_back(number(5));
      ds.solar_zenith_deg.push_back(number(6));
      ds.rel_azimuth_deg.push_back(number(7));
      for (std::size_t b = 0; b < bands; ++b) refl.push_back(number(kLeadingCount + b));
      const CloudLabel label = parse_cloud_label(cells[width - 2]);
      ds.label.push_back(label);
      const std::string_view cot_cell = cells[width - 1];
      if (cot_cell.empty()) {
        if (is_cloudy(label)) throw ParseError("cloudy pixel without cot_log10" + where);
        ds.cot_log10.emplace_back(std::nullopt);
      } else {
        if (!is_cloudy(label)) throw ParseError("cot_log10 given for a clear pixel" + where);
        ds.cot_log10.emplace_back(number(width - 1));
      }
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      if (msg.find(" at data row ") != std::string::npos) throw;
      throw ParseError(msg + where);
    }
  }

  ds.reflectance.resize(static_cast<Eigen::Index>(ds.label.size()), static_cast<Eigen::Index>(bands));
  for (std::size_t i = 0; i < refl.size(); ++i) ds.reflectance.data()[i] = refl[i];
  try {
    ds.validate();
  } catch (const DataError& e) {
    throw ParseError(e.what());
  }
  return ds;
}

PixelDataset load_csv(const std::filesystem::path& path, std::optional<SensorName> expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return load_csv(in, expected);
}

}  // namespace mthccar
