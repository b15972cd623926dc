#include "mthccar/datasynth/dataset.hpp"

#include <cmath>
#include <string>

#include "mthccar/error.hpp"

namespace mthccar {

std::string_view to_string(SurfaceType s) {
  switch (s) {
    case SurfaceType::Land:
      return "land";
    case SurfaceType::Snow:
      return "snow";
    case SurfaceType::Desert:
      return "desert";
    case SurfaceType::Ocean:
      return "ocean";
  }
  return "?";
}

std::string_view to_string(CloudLabel l) {
  switch (l) {
    case CloudLabel::Clear:
      return "clear";
    case CloudLabel::Liquid:
      return "liquid";
    case CloudLabel::Ice:
      return "ice";
  }
  return "?";
}

SurfaceType parse_surface_type(std::string_view s) {
  if (s == "land") return SurfaceType::Land;
  if (s == "snow") return SurfaceType::Snow;
  if (s == "desert") return SurfaceType::Desert;
  if (s == "ocean") return SurfaceType::Ocean;
  throw ParseError("unknown surface_type '" + std::string(s) + "'");
}

CloudLabel parse_cloud_label(std::string_view s) {
  if (s == "clear") return CloudLabel::Clear;
  if (s == "liquid") return CloudLabel::Liquid;
  if (s == "ice") return CloudLabel::Ice;
  throw ParseError("unknown label '" + std::string(s) + "'");
}

Matrix PixelDataset::features() const {
  const auto n = static_cast<Eigen::Index>(size());
  const auto bands = static_cast<Eigen::Index>(sensor.band_count());
  Matrix x = Matrix::Zero(n, static_cast<Eigen::Index>(feature_dim()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    x(i, 0) = surface_pressure_mbar[u];
    x(i, 1) = water_vapor_mm[u];
    x(i, 2) = ozone_du[u];
    x(i, 3 + static_cast<int>(surface_type[u])) = 1.0;
    x.block(i, 7, 1, bands) = reflectance.row(i);
    x(i, 7 + bands) = view_zenith_deg[u];
    x(i, 8 + bands) = solar_zenith_deg[u];
    x(i, 9 + bands) = rel_azimuth_deg[u];
  }
  return x;
}

PixelDataset PixelDataset::subset(std::span<const std::size_t> rows) const {
  PixelDataset out;
  out.sensor = sensor;
  out.reflectance.resize(static_cast<Eigen::Index>(rows.size()), reflectance.cols());
  Eigen::Index r = 0;
  for (std::size_t i : rows) {
    if (i >= size()) throw DataError("subset row " + std::to_string(i) + " out of range");
    out.pixel_id.push_back(pixel_id[i]);
    out.surface_pressure_mbar.push_back(surface_pressure_mbar[i]);
    out.water_vapor_mm.push_back(water_vapor_mm[i]);
    out.ozone_du.push_back(ozone_du[i]);
    out.surface_type.push_back(surface_type[i]);
    out.reflectance.row(r++) = reflectance.row(static_cast<Eigen::Index>(i));
    out.view_zenith_deg.push_back(view_zenith_deg[i]);
    out.solar_zenith_deg.push_back(solar_zenith_deg[i]);
    out.rel_azimuth_deg.push_back(rel_azimuth_deg[i]);
    out.label.push_back(label[i]);
    out.cot_log10.push_back(cot_log10[i]);
  }
  return out;
}

PixelDataset concat(const PixelDataset& a, const PixelDataset& b) {
  if (a.sensor.band_centers_nm != b.sensor.band_centers_nm) {
    throw DataError("concat: datasets come from different sensors");
  }
  PixelDataset out = a;
  auto append = [](auto& dst, const auto& src) { dst.insert(dst.end(), src.begin(), src.end()); };
  append(out.pixel_id, b.pixel_id);
  append(out.surface_pressure_mbar, b.surface_pressure_mbar);
  append(out.water_vapor_mm, b.water_vapor_mm);
  append(out.ozone_du, b.ozone_du);
  append(out.surface_type, b.surface_type);
  append(out.view_zenith_deg, b.view_zenith_deg);
  append(out.solar_zenith_deg, b.solar_zenith_deg);
  append(out.rel_azimuth_deg, b.rel_azimuth_deg);
  append(out.label, b.label);
  append(out.cot_log10, b.cot_log10);
  out.reflectance.resize(a.reflectance.rows() + b.reflectance.rows(), a.reflectance.cols());
  out.reflectance << a.reflectance, b.reflectance;
  return out;
}

void PixelDataset::validate() const {
  const std::size_t n = size();
  auto same = [n](std::size_t m, const char* what) {
    if (m != n) throw DataError(std::string("column '") + what + "' has inconsistent length");
  };
  same(pixel_id.size(), "pixel_id");
  same(surface_pressure_mbar.size(), "surface_pressure_mbar");
  same(water_vapor_mm.size(), "water_vapor_mm");
  same(ozone_du.size(), "ozone_du");
  same(surface_type.size(), "surface_type");
  same(static_cast<std::size_t>(reflectance.rows()), "reflectance");
  same(view_zenith_deg.size(), "view_zenith_deg");
  same(solar_zenith_deg.size(), "solar_zenith_deg");
  same(rel_azimuth_deg.size(), "rel_azimuth_deg");
  same(cot_log10.size(), "cot_log10");
  if (static_cast<std::size_t>(reflectance.cols()) != sensor.band_count()) {
    throw DataError("reflectance has " + std::to_string(reflectance.cols()) + " bands, sensor " +
                    std::string(to_string(sensor.name)) + " has " +
                    std::to_string(sensor.band_count()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row = " (pixel row " + std::to_string(i) + ")";
    if (!(surface_pressure_mbar[i] > 0) || !(water_vapor_mm[i] > 0) || !(ozone_du[i] > 0)) {
      throw DataError("ancillary values must be positive" + row);
    }
    if (!(view_zenith_deg[i] >= 0 && view_zenith_deg[i] <= 90) ||
        !(solar_zenith_deg[i] >= 0 && solar_zenith_deg[i] <= 90) ||
        !(rel_azimuth_deg[i] >= 0 && rel_azimuth_deg[i] <= 180)) {
      throw DataError("viewing geometry out of range" + row);
    }
    const auto r = static_cast<Eigen::Index>(i);
    if (!reflectance.row(r).allFinite() || reflectance.row(r).minCoeff() < 0.0 ||
        reflectance.row(r).maxCoeff() > 1.5) {
      throw DataError("reflectance outside [0, 1.5]" + row);
    }
    if (is_cloudy(label[i]) != cot_log10[i].has_value()) {
      throw DataError("cot_log10 must be present exactly for cloudy pixels" + row);
    }
    if (cot_log10[i] && !(*cot_log10[i] >= kCotMin && *cot_log10[i] <= kCotMax)) {
      throw DataError("cot_log10 outside [-1.5, 2.5]" + row);
    }
  }
}

ThicknessBin assign_thickness_bin(double cot_log10, const BinEdges& edges) {
  if (!(cot_log10 >= edges[0] && cot_log10 <= edges[3])) {
    throw DataError("cot_log10 " + std::to_string(cot_log10) + " outside [" + std::to_string(edges[0]) +
                    ", " + std::to_string(edges[3]) + "]");
  }
  if (cot_log10 < edges[1]) return ThicknessBin::Thin;
  if (cot_log10 < edges[2]) return ThicknessBin::Moderate;
  return ThicknessBin::Thick;
}

Targets make_targets(const PixelDataset& ds, const BinEdges& edges) {
  const auto n = static_cast<Eigen::Index>(ds.size());
  Targets t{Matrix::Zero(n, 1), Matrix::Zero(n, 1), Matrix::Zero(n, 1), Matrix::Zero(n, 1),
            Matrix::Zero(n, 1), Matrix::Zero(n, 3)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    switch (ds.label[u]) {
      case CloudLabel::Clear:
        t.clear(i, 0) = 1.0;
        break;
      case CloudLabel::Liquid:
        t.cloud(i, 0) = 1.0;
        t.liquid(i, 0) = 1.0;
        break;
      case CloudLabel::Ice:
        t.cloud(i, 0) = 1.0;
        t.ice(i, 0) = 1.0;
        break;
    }
    if (ds.cot_log10[u]) {
      t.cot(i, 0) = *ds.cot_log10[u];
      t.bins(i, static_cast<int>(assign_thickness_bin(*ds.cot_log10[u], edges))) = 1.0;
    }
  }
  return t;
}

FeatureScaler FeatureScaler::fit(const Matrix& x) {
  if (x.rows() == 0) throw DataError("cannot fit feature scaler on an empty matrix");
  FeatureScaler s;
  s.mean = x.colwise().mean();
  const Matrix centered = x.rowwise() - s.mean.row(0);
  s.scale = (centered.cwiseAbs2().colwise().sum() / static_cast<double>(x.rows())).cwiseSqrt();
  for (Eigen::Index j = 0; j < s.scale.cols(); ++j) {
    if (!(s.scale(0, j) > 1e-12)) s.scale(0, j) = 1.0;
  }
  return s;
}

Matrix FeatureScaler::transform(const Matrix& x) const {
  if (!fitted()) return x;
  if (x.cols() != mean.cols()) throw DimensionError("feature scaler width does not match input");
  return ((x.rowwise() - mean.row(0)).array().rowwise() / scale.row(0).array()).matrix();
}

}  // namespace mthccar
