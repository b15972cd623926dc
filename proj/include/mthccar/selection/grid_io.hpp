#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mthccar/selection/selection.hpp"

namespace mthccar {

/// Reads a stats grid. Two layouts are accepted, chosen by the header:
///   model,dataset,metric,direction,mu,se          (published summaries)
///   model,dataset,metric,direction,<fold values>  (one column per fold)
/// Throws ParseError with the offending line number.
std::vector<FoldStats> load_stats_grid(std::istream& in);
std::vector<FoldStats> load_stats_grid(const std::filesystem::path& path);

/// Writes the fold-value layout; every entry must carry fold values and all
/// must share the fold count.
void save_stats_grid(std::span<const FoldStats> grid, std::ostream& out);

nlohmann::json to_json(const SelectionScores& s, std::span<const FoldStats> grid);

/// Plain-text report: one block per metric, one row per (dataset, model)
/// with mean, SE, 1SE range, P_ab component and 1SE indicator, then totals.
std::string format_selection_table(const SelectionScores& s, std::span<const FoldStats> grid);

}  // namespace mthccar
