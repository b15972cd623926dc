#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "mthccar/datasynth/dataset.hpp"

namespace mthccar {

/// Writes the dataset CSV: pixel_id, ancillary columns, surface_type,
/// geometry, one refl_<center_nm> column per band, label, cot_log10 (empty
/// for clear pixels). LF line endings, shortest round-trip decimals.
void save_csv(const PixelDataset& ds, std::ostream& out);
void save_csv(const PixelDataset& ds, const std::filesystem::path& path);

/// Parses a dataset CSV. The sensor is identified from the reflectance
/// columns; when `expected` is given a different band layout is an error.
/// All failures raise ParseError naming the offending row.
PixelDataset load_csv(std::istream& in, std::optional<SensorName> expected = std::nullopt);
PixelDataset load_csv(const std::filesystem::path& path,
                      std::optional<SensorName> expected = std::nullopt);

}  // namespace mthccar
