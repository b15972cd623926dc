#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mthccar/error.hpp"
#include "mthccar/selection/grid_io.hpp"
#include "mthccar/selection/selection.hpp"

using namespace mthccar;

namespace {

const std::vector<std::string> kOrder3{"MT-CR", "MT-HCR", "MT-HCCAR"};

FoldStats cell(const std::string& model, double mu, double se, Direction d = Direction::HigherBetter,
               const std::string& metric = "acc_bi", const std::string& dataset = "OCI") {
  return summary_stats(mu, se, model, dataset, metric, d);
}

std::vector<FoldStats> published_grid() { return load_stats_grid(std::filesystem::path(MTHCCAR_TEST_DATA "/published_grid.csv")); }

std::map<std::pair<std::string, std::string>, std::string> published_indicators() {
  std::ifstream in(MTHCCAR_TEST_DATA "/published_indicators.csv");
  std::string line;
  std::getline(in, line);
  std::map<std::pair<std::string, std::string>, std::string> out;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string d, m, s;
    std::getline(ss, d, ',');
    std::getline(ss, m, ',');
    std::getline(ss, s, ',');
    out[{d, m}] = s;
  }
  return out;
}

// Every model equal except `winner`, which is far ahead with tiny SE.
std::vector<FoldStats> dominance_grid(const std::string& winner) {
  std::vector<FoldStats> g;
  for (const char* d : {"OCI", "VIIRS", "ABI"}) {
    for (const auto& [metric, dir] : std::vector<std::pair<std::string, Direction>>{
             {"acc_bi", Direction::HigherBetter},
             {"auprc_w", Direction::HigherBetter},
             {"mse", Direction::LowerBetter},
             {"r2", Direction::HigherBetter}}) {
      for (const auto& m : kOrder3) {
        const bool win = m == winner;
        const double mu = dir == Direction::HigherBetter ? (win ? 0.9 : 0.5) : (win ? 0.01 : 0.1);
        g.push_back(summary_stats(mu, 1e-6, m, d, metric, dir));
      }
    }
  }
  return g;
}

}  // namespace

TEST_CASE("fold_stats examples") {
  const FoldStats a = fold_stats({0.9, 0.9, 0.9}, "m", "d", "k", Direction::HigherBetter);
  CHECK(a.mu == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(a.se == doctest::Approx(0.0));
  const FoldStats b = fold_stats({0.98, 1.00}, "m", "d", "k", Direction::HigherBetter);
  CHECK(b.mu == doctest::Approx(0.99).epsilon(1e-15));
  CHECK(b.se == doctest::Approx(std::sqrt(0.0002) / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(b.se == doctest::Approx(0.01).epsilon(1e-9));
  const FoldStats c = fold_stats({0.3, 0.1, 0.7, 0.2}, "m", "d", "k", Direction::HigherBetter);
  const FoldStats p = fold_stats({0.7, 0.2, 0.3, 0.1}, "m", "d", "k", Direction::HigherBetter);
  CHECK(c.mu == doctest::Approx(p.mu).epsilon(1e-15));
  CHECK(c.se == doctest::Approx(p.se).epsilon(1e-15));
  CHECK_THROWS_AS(fold_stats({0.5}, "m", "d", "k", Direction::HigherBetter), ConfigError);
}

TEST_CASE("direction names round-trip") {
  CHECK(parse_direction(to_string(Direction::LowerBetter)) == Direction::LowerBetter);
  CHECK(parse_direction("higher_better") == Direction::HigherBetter);
  CHECK_THROWS_AS(parse_direction("sideways"), ParseError);
}

TEST_CASE("one_se_select examples") {
  const std::vector<FoldStats> acc{cell("MT-CR", 0.969, 7.608e-4), cell("MT-HCR", 0.984, 6.741e-4),
                                   cell("MT-HCCAR", 0.985, 1.057e-3)};
  CHECK(one_se_select(acc, kOrder3) == "MT-HCR");

  const auto lb = Direction::LowerBetter;
  const std::vector<FoldStats> mse{cell("MT-CR", 0.055, 2.916e-3, lb, "mse"), cell("MT-HCR", 0.034, 5.97e-4, lb, "mse"),
                                   cell("MT-HCCAR", 0.027, 4.91e-4, lb, "mse")};
  CHECK(one_se_select(mse, kOrder3) == "MT-HCCAR");

  const std::vector<FoldStats> tie{cell("MT-HCCAR", 0.9, 0.01), cell("MT-HCR", 0.9, 0.01)};
  CHECK(one_se_select(tie, kOrder3) == "MT-HCR");

  CHECK_THROWS(one_se_select(std::vector<FoldStats>{}, kOrder3));
}

TEST_CASE("one_se_select is invariant under positive affine rescaling of fold values") {
  const std::vector<std::vector<double>> folds{{0.90, 0.92, 0.91}, {0.946, 0.952, 0.949}, {0.94, 0.96, 0.95}};
  for (double scale : {1.0, 3.5, 0.01}) {
    std::vector<FoldStats> c;
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<double> v;
      for (double x : folds[k]) v.push_back(scale * x + 2.0);
      c.push_back(fold_stats(v, kOrder3[k], "d", "acc_bi", Direction::HigherBetter));
    }
    CHECK(one_se_select(c, kOrder3) == "MT-HCR");
  }
}

TEST_CASE("p_ab component examples from the OCI rows") {
  const auto g = published_grid();
  const SelectionScores s = p_ab(g, kOrder3);
  const double acc = s.p_ab_components.at({"MT-CR", "OCI", "acc_bi"});
  CHECK(std::abs(acc * 100.0 - (-1.5)) <= 0.2);
  CHECK(acc == doctest::Approx((0.969 - 0.985) / 0.985).epsilon(1e-12));
  const double mse = s.p_ab_components.at({"MT-CR", "OCI", "mse"});
  CHECK(mse == doctest::Approx(-(0.055 - 0.027) / 0.027).epsilon(1e-12));
  CHECK(std::abs(mse * 100.0 - (-104.0)) < 0.5);
  CHECK(s.p_ab_components.at({"MT-HCCAR", "OCI", "mse"}) == 0.0);
  for (const auto& [key, v] : s.p_ab_components) CHECK(v <= 0.0);
}

TEST_CASE("dominant model collects every 1SE indicator") {
  const auto g = dominance_grid("MT-HCR");
  const SelectionScores s = select_models(g, kOrder3);
  CHECK(s.p_1se_total.at("MT-HCR") == 12.0);
  CHECK(s.p_1se_total.at("MT-CR") == 0.0);
  CHECK(s.p_1se_total.at("MT-HCCAR") == 0.0);
  CHECK(s.p_ab_total.at("MT-HCR") == 0.0);

  auto w = unit_metric_weights();
  w["acc_bi"] = 2.0;
  CHECK(p_1se(g, kOrder3, w).p_1se_total.at("MT-HCR") == 15.0);
}

TEST_CASE("psi columns sum to one per cell") {
  const auto g = published_grid();
  const SelectionScores s = p_1se(g, kOrder3, unit_metric_weights(), OneSeOptions{5e-4});
  double total = 0;
  for (const auto& d : s.datasets) {
    for (const auto& m : s.metrics) {
      int sum = 0;
      for (const auto& model : s.models) sum += s.psi.at({model, d, m});
      CHECK(sum == 1);
    }
  }
  for (const auto& [m, v] : s.p_1se_total) {
    CHECK(v >= 0.0);
    total += v;
  }
  CHECK(total == 12.0);
}

TEST_CASE("published grid reproduces the selection indicators") {
  const auto g = published_grid();
  const SelectionScores s = p_1se(g, kOrder3, unit_metric_weights(), OneSeOptions{5e-4});
  for (const auto& [cellkey, selected] : published_indicators()) {
    CAPTURE(cellkey.first);
    CAPTURE(cellkey.second);
    CHECK(s.psi.at({selected, cellkey.first, cellkey.second}) == 1);
  }
  CHECK(s.p_1se_total.at("MT-CR") == 0.0);
  CHECK(s.p_1se_total.at("MT-HCR") == 4.0);
  CHECK(s.p_1se_total.at("MT-HCCAR") == 8.0);
}

TEST_CASE("without mean tolerance the rounded ABI accuracy cell selects the larger model") {
  // ABI ACC: 0.986 vs best 0.987 with se 6.18e-4 lies 1e-3 > se away only
  // because both means are rounded to three digits.
  const auto g = published_grid();
  const SelectionScores s = p_1se(g, kOrder3);
  CHECK(s.psi.at({"MT-HCCAR", "ABI", "acc_bi"}) == 1);
}

TEST_CASE("incomplete grids and unknown models are rejected") {
  auto g = published_grid();
  g.erase(g.begin() + 4);  // MT-HCR, VIIRS, acc_bi
  try {
    p_1se(g, kOrder3);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("(MT-HCR, VIIRS, acc_bi)") != std::string::npos);
  }
  auto h = published_grid();
  h[0].model = "MT-XYZ";
  CHECK_THROWS_AS(p_ab(h, kOrder3), ConfigError);
  std::vector<FoldStats> zero{cell("MT-CR", 0.0, 0.1), cell("MT-HCR", 0.0, 0.1)};
  CHECK_THROWS_AS(p_ab(zero, kOrder3), UndefinedMetricError);
}

TEST_CASE("grid io round trip in the fold layout") {
  std::vector<FoldStats> g;
  for (const auto& m : kOrder3) {
    g.push_back(fold_stats({0.1, 0.2, 0.4}, m, "ABI", "mse", Direction::LowerBetter));
  }
  std::ostringstream out;
  save_stats_grid(g, out);
  std::istringstream in(out.str());
  const auto back = load_stats_grid(in);
  REQUIRE(back.size() == 3);
  CHECK(back[1].model == "MT-HCR");
  CHECK(back[1].direction == Direction::LowerBetter);
  CHECK(back[1].fold_values == g[1].fold_values);
  CHECK(back[1].se == g[1].se);
}

TEST_CASE("grid loader reports the offending line") {
  std::istringstream in("model,dataset,metric,direction,mu,se\nMT-CR,OCI,acc_bi,higher_better,0.9,oops\n");
  try {
    load_stats_grid(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("at line 2") != std::string::npos);
  }
}

TEST_CASE("selection table and json cover every model") {
  const auto g = published_grid();
  const SelectionScores s = select_models(g, kOrder3, unit_metric_weights(), OneSeOptions{5e-4});
  const std::string table = format_selection_table(s, g);
  for (const auto& m : kOrder3) CHECK(table.find(m) != std::string::npos);
  const auto j = to_json(s, g);
  CHECK(j.at("p_1se_total").at("MT-HCCAR") == 8.0);
}
