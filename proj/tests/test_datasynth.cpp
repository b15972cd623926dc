#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mthccar/datasynth/csv.hpp"
#include "mthccar/datasynth/dataset.hpp"
#include "mthccar/datasynth/generator.hpp"
#include "mthccar/datasynth/sensors.hpp"
#include "mthccar/datasynth/splits.hpp"
#include "mthccar/error.hpp"

using namespace mthccar;

namespace {

PixelDataset small_abi(std::size_t n, std::uint64_t seed) {
  GeneratorConfig g;
  g.n = n;
  g.seed = seed;
  return generate_dataset(g, sensor_band_config(SensorName::ABI));
}

std::string to_csv(const PixelDataset& ds) {
  std::ostringstream out;
  save_csv(ds, out);
  return out.str();
}

}  // namespace

TEST_CASE("sensor registry band counts and discrete centers") {
  CHECK(sensor_band_config("OCI").band_count() == 233);
  CHECK(sensor_band_config("viirs").band_count() == 10);
  CHECK(sensor_band_config(SensorName::ABI).band_count() == 6);
  CHECK(sensor_band_config("ABI").band_centers_nm == std::vector<double>{471, 640, 860, 1370, 1600, 2200});
  CHECK(sensor_band_config("VIIRS").band_centers_nm ==
        std::vector<double>{412, 445, 488, 555, 672, 865, 1240, 1380, 1610, 2250});
  const auto oci = sensor_band_config("OCI").band_centers_nm;
  CHECK(oci.front() == 350.0);
  CHECK(oci[225] == doctest::Approx(890.0));
  CHECK(std::vector<double>(oci.begin() + 226, oci.end()) ==
        std::vector<double>{940, 1040, 1250, 1378, 1620, 2130, 2260});
  CHECK(std::is_sorted(oci.begin(), oci.end()));
  CHECK_THROWS_AS(parse_sensor_name("XYZ"), ConfigError);
}

TEST_CASE("thickness bins are half-open with the last bin closed") {
  CHECK(assign_thickness_bin(-1.5) == ThicknessBin::Thin);
  CHECK(assign_thickness_bin(-0.01) == ThicknessBin::Thin);
  CHECK(assign_thickness_bin(0.0) == ThicknessBin::Moderate);
  CHECK(assign_thickness_bin(0.999) == ThicknessBin::Moderate);
  CHECK(assign_thickness_bin(1.0) == ThicknessBin::Thick);
  CHECK(assign_thickness_bin(2.5) == ThicknessBin::Thick);
  CHECK_THROWS_AS(assign_thickness_bin(2.5001), DataError);
  CHECK_THROWS_AS(assign_thickness_bin(-1.6), DataError);
}

TEST_CASE("generator is deterministic and respects its ranges") {
  const PixelDataset a = small_abi(2000, 7);
  const PixelDataset b = small_abi(2000, 7);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(to_csv(a) != to_csv(small_abi(2000, 8)));
  CHECK_NOTHROW(a.validate());
  CHECK(a.feature_dim() == 16);
  CHECK(a.features().cols() == 16);

  std::size_t clear = 0, liquid = 0, ice = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.label[i] == CloudLabel::Clear) {
      ++clear;
      CHECK_FALSE(a.cot_log10[i].has_value());
    } else {
      (a.label[i] == CloudLabel::Liquid ? liquid : ice)++;
      REQUIRE(a.cot_log10[i].has_value());
      CHECK(*a.cot_log10[i] >= kCotMin);
      CHECK(*a.cot_log10[i] <= kCotMax);
    }
    CHECK(a.surface_pressure_mbar[i] >= 700.0);
    CHECK(a.surface_pressure_mbar[i] <= 1050.0);
  }
  // Priors 0.4 / 0.3 / 0.3; 4-sigma binomial bands at n = 2000.
  CHECK(std::abs(static_cast<double>(clear) / 2000.0 - 0.4) < 0.045);
  CHECK(std::abs(static_cast<double>(liquid) / 2000.0 - 0.3) < 0.042);
  CHECK(std::abs(static_cast<double>(ice) / 2000.0 - 0.3) < 0.042);
  CHECK(a.reflectance.minCoeff() >= 0.0);
  CHECK(a.reflectance.maxCoeff() <= 1.5);
}

TEST_CASE("toy forward model separates phase and thickness") {
  // SWIR absorption: ice darker than liquid at 1600 nm for a thick cloud.
  const double liq = toy_reflectance(CloudLabel::Liquid, 2.0, SurfaceType::Ocean, 1600, 20, 300, 1000, 0, 30, 0);
  const double ice = toy_reflectance(CloudLabel::Ice, 2.0, SurfaceType::Ocean, 1600, 20, 300, 1000, 0, 30, 0);
  CHECK(ice < liq);
  // Brightness rises with COT over a dark ocean.
  const double thin = toy_reflectance(CloudLabel::Liquid, -1.0, SurfaceType::Ocean, 640, 20, 300, 1000, 0, 30, 0);
  CHECK(thin < toy_reflectance(CloudLabel::Liquid, 1.0, SurfaceType::Ocean, 640, 20, 300, 1000, 0, 30, 0));
  // cot is ignored for clear pixels.
  CHECK(toy_reflectance(CloudLabel::Clear, -1.0, SurfaceType::Land, 640, 20, 300, 1000, 0, 30, 0) ==
        toy_reflectance(CloudLabel::Clear, 2.0, SurfaceType::Land, 640, 20, 300, 1000, 0, 30, 0));
}

TEST_CASE("invalid generator configs are rejected") {
  GeneratorConfig g;
  g.priors = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(generate_dataset(g, sensor_band_config("ABI")), ConfigError);
  g = GeneratorConfig{};
  g.noise_sd = -1.0;
  CHECK_THROWS_AS(generate_dataset(g, sensor_band_config("ABI")), ConfigError);
}

TEST_CASE("csv round trip is byte-identical and infers the sensor") {
  const PixelDataset a = small_abi(50, 3);
  const std::string text = to_csv(a);
  std::istringstream in(text);
  const PixelDataset b = load_csv(in);
  CHECK(b.sensor.name == SensorName::ABI);
  CHECK(to_csv(b) == text);
  CHECK((a.features().array() == b.features().array()).all());
}

TEST_CASE("csv loader reports band mismatches and bad rows") {
  const std::string text = to_csv(small_abi(5, 1));
  {
    std::istringstream in(text);
    try {
      load_csv(in, SensorName::VIIRS);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("band-count mismatch") != std::string::npos);
    }
  }
  {
    std::string broken = text;
    const auto second_line = broken.find('\n') + 1;
    broken.insert(second_line, "x");  // corrupt the pixel id of data row 1
    std::istringstream in(broken);
    try {
      load_csv(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("at data row 1") != std::string::npos);
    }
  }
}

TEST_CASE("targets encode hierarchy and bins") {
  const PixelDataset ds = small_abi(300, 4);
  const Targets t = make_targets(ds);
  for (std::size_t k = 0; k < ds.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    CHECK(t.cloud(i, 0) + t.clear(i, 0) == 1.0);
    CHECK(t.liquid(i, 0) + t.ice(i, 0) == t.cloud(i, 0));
    CHECK(t.bins.row(i).sum() == t.cloud(i, 0));
    if (is_cloudy(ds.label[k])) {
      CHECK(t.cot(i, 0) == *ds.cot_log10[k]);
      CHECK(t.bins(i, static_cast<Eigen::Index>(assign_thickness_bin(*ds.cot_log10[k]))) == 1.0);
    } else {
      CHECK(t.cot(i, 0) == 0.0);
    }
  }
}

TEST_CASE("feature scaler standardizes training columns") {
  Matrix x{{1.0, 5.0, 2.0}, {3.0, 5.0, 4.0}, {5.0, 5.0, 9.0}};
  const FeatureScaler s = FeatureScaler::fit(x);
  const Matrix z = s.transform(x);
  for (Eigen::Index j = 0; j < 3; ++j) CHECK(std::abs(z.col(j).mean()) < 1e-12);
  CHECK(s.scale(0, 1) == 1.0);  // constant column
  CHECK(FeatureScaler{}.transform(x) == x);
}

TEST_CASE("split sizes follow the literal fractions with a visible remainder") {
  const SplitIndices s = split(1000, SplitPlan{});
  CHECK(s.train.size() == 625);
  CHECK(s.val.size() == 225);
  CHECK(s.test.size() == 100);
  CHECK(s.unassigned.size() == 50);
  std::set<std::size_t> all;
  for (const auto* part : {&s.train, &s.val, &s.test, &s.unassigned}) all.insert(part->begin(), part->end());
  CHECK(all.size() == 1000);
  SplitPlan bad;
  bad.train_frac = 0.9;
  CHECK_THROWS_AS(split(10, bad), ConfigError);
}

TEST_CASE("k-fold indices partition the pixels") {
  const auto folds = kfold_indices(10, 3, 5);
  REQUIRE(folds.size() == 3);
  CHECK(folds[0].size() == 4);
  CHECK(folds[1].size() == 3);
  CHECK(folds[2].size() == 3);
  std::set<std::size_t> all;
  for (const auto& f : folds) all.insert(f.begin(), f.end());
  CHECK(all.size() == 10);
  CHECK(kfold_indices(10, 3, 5) == folds);
  CHECK_THROWS_AS(kfold_indices(10, 1, 0), ConfigError);
  CHECK_THROWS_AS(kfold_indices(2, 3, 0), ConfigError);
}

TEST_CASE("subset and concat preserve rows") {
  const PixelDataset ds = small_abi(20, 2);
  const std::vector<std::size_t> rows{3, 1, 7};
  const PixelDataset sub = ds.subset(rows);
  CHECK(sub.size() == 3);
  CHECK(sub.pixel_id[0] == 3);
  CHECK((sub.features().row(2).array() == ds.features().row(7).array()).all());
  CHECK(concat(sub, sub).size() == 6);
}
