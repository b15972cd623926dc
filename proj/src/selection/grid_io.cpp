#include "mthccar/selection/grid_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "mthccar/error.hpp"
#include "mthccar/text_io.hpp"

namespace mthccar {
namespace {

const FoldStats* find(std::span<const FoldStats> grid, const std::string& m, const std::string& d,
                      const std::string& k) {
  for (const auto& s : grid) {
    if (s.model == m && s.dataset == d && s.metric == k) return &s;
  }
  return nullptr;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3E", v);
  return buf;
}

}  // namespace

std::vector<FoldStats> load_stats_grid(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("stats grid: empty input");
  const auto header = split_csv_line(line);
  if (header.size() < 6 || header[0] != "model" || header[1] != "dataset" || header[2] != "metric" ||
      header[3] != "direction") {
    throw ParseError("stats grid: header must start with model,dataset,metric,direction");
  }
  const bool summary = header.size() == 6 && header[4] == "mu" && header[5] == "se";

  std::vector<FoldStats> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    const std::string where = " at line " + std::to_string(line_no);
    if (f.size() != header.size()) {
      throw ParseError("stats grid: expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(f.size()) + where);
    }
    std::vector<double> values;
    for (std::size_t c = 4; c < f.size(); ++c) {
      const auto v = parse_double(f[c]);
      if (!v) throw ParseError("stats grid: bad number '" + std::string(f[c]) + "'" + where);
      values.push_back(*v);
    }
    Direction dir;
    try {
      dir = parse_direction(f[3]);
    } catch (const ParseError& e) {
      throw ParseError(std::string("stats grid: ") + e.what() + where);
    }
    std::string model(f[0]), dataset(f[1]), metric(f[2]);
    if (summary) {
      if (values[1] < 0.0) throw ParseError("stats grid: negative se" + where);
      out.push_back(summary_stats(values[0], values[1], model, dataset, metric, dir));
    } else {
      out.push_back(fold_stats(std::move(values), model, dataset, metric, dir));
    }
  }
  return out;
}

std::vector<FoldStats> load_stats_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read stats grid " + path.string());
  return load_stats_grid(in);
}

void save_stats_grid(std::span<const FoldStats> grid, std::ostream& out) {
  if (grid.empty()) throw ConfigError("nothing to write: empty stats grid");
  const std::size_t k = grid.front().fold_values.size();
  if (k < 2) throw ConfigError("stats grid entries carry no fold values");
  out << "model,dataset,metric,direction";
  for (std::size_t i = 0; i < k; ++i) out << ",fold_" << i;
  out << '\n';
  for (const auto& s : grid) {
    if (s.fold_values.size() != k) throw ConfigError("stats grid entries differ in fold count");
    out << s.model << ',' << s.dataset << ',' << s.metric << ',' << to_string(s.direction);
    for (double v : s.fold_values) out << ',' << format_double(v);
    out << '\n';
  }
}

nlohmann::json to_json(const SelectionScores& s, std::span<const FoldStats> grid) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& k : s.metrics) {
    for (const auto& d : s.datasets) {
      for (const auto& m : s.models) {
        const FoldStats* f = find(grid, m, d, k);
        nlohmann::json c{{"model", m}, {"dataset", d}, {"metric", k}};
        if (f) {
          c["direction"] = to_string(f->direction);
          c["mu"] = f->mu;
          c["se"] = f->se;
          c["range"] = {f->lo(), f->hi()};
        }
        if (const auto it = s.p_ab_components.find({m, d, k}); it != s.p_ab_components.end()) c["p_ab"] = it->second;
        if (const auto it = s.psi.find({m, d, k}); it != s.psi.end()) c["psi"] = it->second;
        cells.push_back(std::move(c));
      }
    }
  }
  return nlohmann::json{{"models", s.models},           {"datasets", s.datasets},
                        {"metrics", s.metrics},         {"weights", s.weights},
                        {"cells", cells},               {"p_ab_total", s.p_ab_total},
                        {"p_1se_total", s.p_1se_total}};
}

std::string format_selection_table(const SelectionScores& s, std::span<const FoldStats> grid) {
  std::string out;
  char row[256];
  for (const auto& k : s.metrics) {
    out += "== " + k + " ==\n";
    std::snprintf(row, sizeof(row), "%-8s %-10s %10s %10s %22s %10s %5s\n", "dataset", "model", "mu", "se",
                  "1se_range", "p_ab", "psi");
    out += row;
    for (const auto& d : s.datasets) {
      for (const auto& m : s.models) {
        const FoldStats* f = find(grid, m, d, k);
        if (!f) continue;
        const auto ab = s.p_ab_components.find({m, d, k});
        const auto psi = s.psi.find({m, d, k});
        const std::string range = "[" + fixed(f->lo(), 4) + ", " + fixed(f->hi(), 4) + "]";
        std::snprintf(row, sizeof(row), "%-8s %-10s %10s %10s %22s %10s %5s\n", d.c_str(), m.c_str(),
                      fixed(f->mu, 4).c_str(), sci(f->se).c_str(), range.c_str(),
                      ab == s.p_ab_components.end() ? "-" : (fixed(100.0 * ab->second, 2) + "%").c_str(),
                      psi == s.psi.end() ? "-" : std::to_string(psi->second).c_str());
        out += row;
      }
    }
    out += '\n';
  }
  out += "totals\n";
  for (const auto& m : s.models) {
    const auto ab = s.p_ab_total.find(m);
    const auto se = s.p_1se_total.find(m);
    std::snprintf(row, sizeof(row), "%-10s P_ab %10s  P_1SE %s\n", m.c_str(),
                  ab == s.p_ab_total.end() ? "-" : (fixed(100.0 * ab->second, 2) + "%").c_str(),
                  se == s.p_1se_total.end() ? "-" : format_double(se->second).c_str());
    out += row;
  }
  return out;
}

}  // namespace mthccar
