#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mthccar/architectures/checkpoint.hpp"
#include "mthccar/cli/commands.hpp"
#include "mthccar/datasynth/csv.hpp"
#include "mthccar/selection/grid_io.hpp"

using namespace mthccar;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "mthccar_test_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("gen-data writes the requested rows and is byte-deterministic") {
  const fs::path dir = scratch("gen");
  const auto a = (dir / "a.csv").string();
  const auto b = (dir / "b.csv").string();
  REQUIRE(cli({"gen-data", "--sensor", "ABI", "--n", "1000", "--seed", "7", "--out", a}).code == kExitOk);
  REQUIRE(cli({"gen-data", "--sensor", "ABI", "--n", "1000", "--seed", "7", "--out", b}).code == kExitOk);
  CHECK(slurp(a) == slurp(b));
  const PixelDataset ds = load_csv(fs::path(a));
  CHECK(ds.size() == 1000);
  CHECK(ds.reflectance.cols() == 6);
  CHECK(fs::exists(a + ".config.json"));
}

TEST_CASE("unknown sensors and missing flags are usage errors") {
  const fs::path dir = scratch("bad");
  const Run r = cli({"gen-data", "--sensor", "XYZ", "--n", "10", "--out", (dir / "x.csv").string()});
  CHECK(r.code == kExitUsage);
  CHECK_FALSE(r.err.empty());
  CHECK(cli({"gen-data", "--n", "10"}).code == kExitUsage);
  CHECK(cli({"no-such-command"}).code == kExitUsage);
}

TEST_CASE("zero-epoch training stores the initialization and reload reproduces the report") {
  const fs::path dir = scratch("train0");
  const Run r = cli({"train", "--variant", "MT-HCCAR", "--n", "300", "--seed", "3", "--epochs", "0", "--out",
                     (dir / "run").string()});
  REQUIRE(r.code == kExitOk);
  const Checkpoint ck = load_checkpoint(dir / "run" / "checkpoint.json");
  const Model init = build_model(ck.model.spec, 3);
  for (const auto& p : init.stores[0]) {
    CHECK((ck.model.param(p.name).value.array() == p.value.array()).all());
  }
  for (const char* f : {"history.csv", "scaler.json", "eval.json", "config.json"}) CHECK(fs::exists(dir / "run" / f));

  // Re-evaluating the stored checkpoint on the generated data set twice.
  const auto data = (dir / "data.csv").string();
  REQUIRE(cli({"gen-data", "--n", "300", "--seed", "3", "--out", data}).code == kExitOk);
  const auto e1 = (dir / "e1.json").string();
  const auto e2 = (dir / "e2.json").string();
  const auto ckpt = (dir / "run" / "checkpoint.json").string();
  REQUIRE(cli({"eval", "--checkpoint", ckpt, "--data", data, "--out", e1}).code == kExitOk);
  REQUIRE(cli({"eval", "--checkpoint", ckpt, "--data", data, "--out", e2}).code == kExitOk);
  CHECK(slurp(e1) == slurp(e2));
}

TEST_CASE("training reduces the loss and reloaded checkpoints evaluate identically") {
  const fs::path dir = scratch("train");
  REQUIRE(cli({"train", "--variant", "MT-HCR", "--n", "400", "--seed", "5", "--epochs", "5", "--lr", "1e-3",
               "--dump-scatter", "--out", (dir / "run").string()})
              .code == kExitOk);
  const auto data = (dir / "data.csv").string();
  REQUIRE(cli({"gen-data", "--n", "400", "--seed", "5", "--out", data}).code == kExitOk);
  const auto ckpt = (dir / "run" / "checkpoint.json").string();
  const auto ev = (dir / "ev.json").string();
  REQUIRE(cli({"eval", "--checkpoint", ckpt, "--data", data, "--out", ev}).code == kExitOk);
  const Checkpoint ck = load_checkpoint(fs::path(ckpt));
  const auto again = (dir / "ev2.json").string();
  REQUIRE(cli({"eval", "--checkpoint", ckpt, "--data", data, "--out", again}).code == kExitOk);
  CHECK(slurp(ev) == slurp(again));
  CHECK(ck.config.epochs == 5);
  CHECK(fs::exists(dir / "run" / "scatter.csv"));
  const std::string history = slurp(dir / "run" / "history.csv");
  CHECK(std::count(history.begin(), history.end(), '\n') == 6);
  std::istringstream rows(history);
  std::string line;
  std::vector<double> totals;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (int c = 0; c <= 9; ++c) std::getline(ss, cell, ',');  // column 9 is the train total
    totals.push_back(std::stod(cell));
  }
  REQUIRE(totals.size() == 5);
  CHECK(totals.back() < totals.front());
}

TEST_CASE("select reproduces the published indicator totals and names missing cells") {
  const fs::path dir = scratch("select");
  const std::string grid = MTHCCAR_TEST_DATA "/published_grid.csv";
  const Run r = cli({"select", "--grid", grid, "--mean-tolerance", "5e-4", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  const auto j = read_json(dir / "selection.json");
  CHECK(j.at("p_1se_total").at("MT-CR") == 0.0);
  CHECK(j.at("p_1se_total").at("MT-HCR") == 4.0);
  CHECK(j.at("p_1se_total").at("MT-HCCAR") == 8.0);
  CHECK(fs::exists(dir / "selection.txt"));

  std::string text = slurp(grid);
  const auto pos = text.find("MT-HCR,VIIRS,mse");
  text.erase(pos, text.find('\n', pos) - pos + 1);
  const auto partial = (dir / "partial.csv").string();
  std::ofstream(partial, std::ios::binary) << text;
  const Run bad = cli({"select", "--grid", partial, "--out", (dir / "bad").string()});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("(MT-HCR, VIIRS, mse)") != std::string::npos);
}

TEST_CASE("select on a single-model grid picks it everywhere") {
  const fs::path dir = scratch("single");
  const auto grid = (dir / "g.csv").string();
  std::ofstream(grid, std::ios::binary) << "model,dataset,metric,direction,mu,se\n"
                                           "MT-HCR,ABI,acc_bi,higher_better,0.9,0.01\n"
                                           "MT-HCR,ABI,mse,lower_better,0.05,0.01\n";
  REQUIRE(cli({"select", "--grid", grid, "--out", (dir / "o").string()}).code == kExitOk);
  CHECK(read_json(dir / "o" / "selection.json").at("p_1se_total").at("MT-HCR") == 2.0);
}

TEST_CASE("kfold writes K reports with (K-1)N/K training pixels and a loadable grid") {
  const fs::path dir = scratch("kfold");
  const Run r = cli({"kfold", "--variants", "MT-CR,MT-HCR", "--k", "3", "--n", "300", "--seed", "2", "--epochs",
                     "1", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  for (int i = 0; i < 3; ++i) CHECK(fs::exists(dir / "MT-CR" / ("fold_" + std::to_string(i)) / "eval.json"));
  std::istringstream folds(slurp(dir / "folds.csv"));
  std::string line;
  std::getline(folds, line);
  int rows = 0;
  while (std::getline(folds, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string variant, fold, train_size;
    std::getline(ss, variant, ',');
    std::getline(ss, fold, ',');
    std::getline(ss, train_size, ',');
    CHECK(train_size == "200");
  }
  CHECK(rows == 6);
  const auto grid = load_stats_grid(dir / "fold_stats.csv");
  CHECK(grid.size() == 8);
  CHECK(grid[0].fold_values.size() == 3);
  CHECK(cli({"select", "--grid", (dir / "fold_stats.csv").string(), "--out", (dir / "sel").string()}).code ==
        kExitOk);
  CHECK(cli({"kfold", "--k", "1", "--n", "30", "--out", (dir / "k1").string()}).code == kExitUsage);
}

TEST_CASE("ablate writes one row per variant and a parameter manifest") {
  const fs::path dir = scratch("ablate");
  REQUIRE(cli({"ablate", "--variants", "MT-HCR,MT-HCCAR", "--n", "200", "--seed", "4", "--epochs", "1", "--out",
               dir.string()})
              .code == kExitOk);
  const auto manifest = read_json(dir / "manifest.json");
  CHECK(manifest.at("MT-HCCAR").at("parameter_count").get<std::size_t>() >
        manifest.at("MT-HCR").at("parameter_count").get<std::size_t>());
  const std::string table = slurp(dir / "ablation.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);
}
