#include "mthccar/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mthccar/architectures/checkpoint.hpp"
#include "mthccar/architectures/train.hpp"
#include "mthccar/datasynth/csv.hpp"
#include "mthccar/datasynth/generator.hpp"
#include "mthccar/datasynth/splits.hpp"
#include "mthccar/error.hpp"
#include "mthccar/metrics/evaluate.hpp"
#include "mthccar/selection/grid_io.hpp"
#include "mthccar/text_io.hpp"

namespace mthccar {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- experiment configuration -------------------------------------------

struct Experiment {
  std::string sensor = "ABI";
  bool sensor_given = false;
  std::optional<std::string> data_path;
  GeneratorConfig generator;
  std::uint64_t seed = 0;
  json architecture = json::object();
  TrainConfig train;
  SplitPlan split;
  int kfold_k = 10;
  int jobs = 1;
  bool fmg_linear_space = false;
  std::string dataset_name;
  std::vector<std::string> variants;
};

void apply_config_file(Experiment& e, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
    if (j.contains("sensor")) {
      e.sensor = j.at("sensor").get<std::string>();
      e.sensor_given = true;
    }
    if (j.contains("data") && !j.at("data").is_null()) e.data_path = j.at("data").get<std::string>();
    if (j.contains("seed")) e.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("generator")) {
      const auto& g = j.at("generator");
      e.generator.n = g.value("n", e.generator.n);
      e.generator.noise_sd = g.value("noise_sd", e.generator.noise_sd);
      if (g.contains("priors")) {
        const auto& p = g.at("priors");
        e.generator.priors.p_clear = p.value("clear", e.generator.priors.p_clear);
        e.generator.priors.p_liquid = p.value("liquid", e.generator.priors.p_liquid);
        e.generator.priors.p_ice = p.value("ice", e.generator.priors.p_ice);
      }
    }
    if (j.contains("architecture")) e.architecture = j.at("architecture");
    if (j.contains("train")) e.train = train_config_from_json(j.at("train"), e.train);
    if (j.contains("split")) {
      const auto& s = j.at("split");
      e.split.train_frac = s.value("train_frac", e.split.train_frac);
      e.split.val_frac = s.value("val_frac", e.split.val_frac);
      e.split.test_frac = s.value("test_frac", e.split.test_frac);
    }
    e.kfold_k = j.value("kfold_k", e.kfold_k);
    e.fmg_linear_space = j.value("fmg_linear_space", e.fmg_linear_space);
    e.dataset_name = j.value("dataset_name", e.dataset_name);
    if (j.contains("variants")) e.variants = j.at("variants").get<std::vector<std::string>>();
  } catch (const json::exception& ex) {
    throw ConfigError("config " + path + ": " + ex.what());
  }
}

json to_json(const Experiment& e, const std::string& command) {
  json data = e.data_path ? json{{"path", *e.data_path}}
                          : json{{"generator",
                                  {{"n", e.generator.n},
                                   {"noise_sd", e.generator.noise_sd},
                                   {"seed", e.generator.seed},
                                   {"priors",
                                    {{"clear", e.generator.priors.p_clear},
                                     {"liquid", e.generator.priors.p_liquid},
                                     {"ice", e.generator.priors.p_ice}}}}}};
  return json{{"command", command},
              {"sensor", e.sensor},
              {"seed", e.seed},
              {"data", data},
              {"architecture", e.architecture},
              {"train", mthccar::to_json(e.train)},
              {"split",
               {{"train_frac", e.split.train_frac},
                {"val_frac", e.split.val_frac},
                {"test_frac", e.split.test_frac},
                {"seed", e.split.seed}}},
              {"kfold_k", e.kfold_k},
              {"fmg_linear_space", e.fmg_linear_space},
              {"dataset_name", e.dataset_name},
              {"variants", e.variants}};
}

// Flags registered on every data-consuming subcommand. Values land in the
// optionals and override the config file only when given.
struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::string> sensor;
  std::optional<std::string> data;
  std::optional<std::size_t> n;
  std::optional<double> noise_sd;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<int> batch_size;
  std::optional<double> lambda;
  std::optional<double> grad_clip;
  std::optional<int> latent_dim;
  std::optional<std::string> gating;
  bool fmg_linear = false;
  std::optional<std::string> dataset_name;
};

void add_common(CLI::App* app, CommonFlags& f, bool needs_training) {
  app->add_option("--config", f.config, "JSON experiment config");
  app->add_option("--seed", f.seed, "base seed for generation, splits, init and shuffling");
  app->add_option("--out", f.out, "output path")->required();
  app->add_option("--sensor", f.sensor, "OCI, VIIRS or ABI");
  app->add_option("--data", f.data, "dataset CSV (generated when omitted)");
  app->add_option("--n", f.n, "pixels to generate when --data is omitted");
  app->add_option("--noise-sd", f.noise_sd, "reflectance noise standard deviation");
  if (!needs_training) return;
  app->add_option("--epochs", f.epochs, "training epochs");
  app->add_option("--lr", f.lr, "learning rate");
  app->add_option("--batch-size", f.batch_size, "mini-batch size");
  app->add_option("--lambda", f.lambda, "lasso weight");
  app->add_option("--grad-clip", f.grad_clip, "global gradient-norm clip");
  app->add_option("--latent-dim", f.latent_dim, "latent width");
  app->add_option("--gating", f.gating, "soft or hard phase gating during training");
  app->add_flag("--fmg-linear", f.fmg_linear, "FMG relative error on 10^cot instead of log10 cot");
}

Experiment resolve(const CommonFlags& f) {
  Experiment e;
  if (!f.config.empty()) apply_config_file(e, f.config);
  if (f.sensor) {
    e.sensor = *f.sensor;
    e.sensor_given = true;
  }
  if (f.data) e.data_path = *f.data;
  if (f.seed) e.seed = *f.seed;
  if (f.n) e.generator.n = *f.n;
  if (f.noise_sd) e.generator.noise_sd = *f.noise_sd;
  if (f.epochs) e.train.epochs = *f.epochs;
  if (f.lr) e.train.learning_rate = *f.lr;
  if (f.batch_size) e.train.batch_size = *f.batch_size;
  if (f.lambda) e.train.lasso_lambda = *f.lambda;
  if (f.grad_clip) e.train.grad_clip = *f.grad_clip;
  if (f.latent_dim) e.architecture["latent_dim"] = *f.latent_dim;
  if (f.gating) e.architecture["gating_mode"] = *f.gating;
  if (f.fmg_linear) e.fmg_linear_space = true;
  if (f.dataset_name) e.dataset_name = *f.dataset_name;
  e.sensor = std::string(to_string(parse_sensor_name(e.sensor)));
  e.generator.seed = e.seed;
  e.split.seed = e.seed;
  e.train.seed = e.seed;
  e.split.validate();
  if (e.train.epochs < 0) throw ConfigError("epochs must be non-negative");
  if (e.dataset_name.empty()) e.dataset_name = e.sensor;
  return e;
}

PixelDataset load_data(const Experiment& e) {
  if (e.data_path) {
    std::optional<SensorName> expected;
    if (e.sensor_given) expected = parse_sensor_name(e.sensor);
    return load_csv(fs::path(*e.data_path), expected);
  }
  if (e.generator.n == 0) throw ConfigError("--n must be positive");
  return generate_dataset(e.generator, sensor_band_config(e.sensor));
}

ArchitectureSpec spec_for(const Experiment& e, Variant v, int input_dim) {
  json j = e.architecture;
  j["variant"] = std::string(to_string(v));
  return spec_from_json(j, input_dim);
}

// ---- artifact writers ----------------------------------------------------

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string opt_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string history_csv(const TrainResult& r) {
  std::string s = "epoch,l_cmask,l_cphase,l_hc,l_reg,l_caux,l_car,l_rec,l_lasso,total,val_total\n";
  for (const auto& h : r.history) {
    const auto& b = h.train;
    s += std::to_string(h.epoch);
    for (double v : {b.l_cmask, b.l_cphase, b.l_hc, b.l_reg, b.l_caux, b.l_car, b.l_rec, b.l_lasso, b.total,
                     h.val_total}) {
      s += ',' + (std::isnan(v) ? std::string() : format_double(v));
    }
    s += '\n';
  }
  return s;
}

std::string scatter_csv(const Model& model, const PixelDataset& ds) {
  const ModelOutputs o = forward(model, ds.features(), false);
  std::string s = "pixel_id,label,y_true,y_pred\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!is_cloudy(ds.label[i])) continue;
    s += std::to_string(ds.pixel_id[i]) + ',' + std::string(to_string(ds.label[i])) + ',' +
         format_double(*ds.cot_log10[i]) + ',' + format_double(o.y_cot_hat(static_cast<Eigen::Index>(i))) + '\n';
  }
  return s;
}

json scaler_json(const FeatureScaler& s) {
  auto row = [](const Matrix& m) { return std::vector<double>(m.data(), m.data() + m.size()); };
  return json{{"mean", row(s.mean)}, {"scale", row(s.scale)}};
}

struct TrainedRun {
  Model model;
  TrainResult history;
  EvalReport report;
};

TrainedRun train_and_eval(const Experiment& e, Variant v, const PixelDataset& train_set,
                          const PixelDataset& val_set, const PixelDataset& test_set, const TrainConfig& cfg,
                          std::uint64_t init_seed) {
  const ArchitectureSpec spec = spec_for(e, v, static_cast<int>(train_set.feature_dim()));
  TrainedRun run{build_model(spec, init_seed), {}, {}};
  run.history = train(run.model, train_set, val_set, cfg);
  if (!run.model.scaler.fitted()) run.model.scaler = FeatureScaler::fit(train_set.features());
  EvalOptions opts;
  opts.fmg.linear_space = e.fmg_linear_space;
  run.report = evaluate(run.model, test_set, opts);
  return run;
}

struct Splits {
  PixelDataset train, val, test;
};

Splits make_splits(const Experiment& e, const PixelDataset& ds) {
  const SplitIndices idx = split(ds.size(), e.split);
  return {ds.subset(idx.train), ds.subset(idx.val), ds.subset(idx.test)};
}

void write_run(const fs::path& dir, const Experiment& e, const TrainedRun& run, const PixelDataset& test_set,
               bool dump_scatter, const std::string& command) {
  ensure_dir(dir);
  save_checkpoint(run.model, e.train, dir / "checkpoint.json");
  write_text(dir / "history.csv", history_csv(run.history));
  write_json(dir / "scaler.json", scaler_json(run.model.scaler));
  write_json(dir / "eval.json", to_json(run.report));
  json cfg = to_json(e, command);
  cfg["variant"] = run.report.variant;
  cfg["architecture"] = mthccar::to_json(run.model.spec);
  cfg["parameter_count"] = run.model.parameter_count();
  write_json(dir / "config.json", cfg);
  if (dump_scatter) write_text(dir / "scatter.csv", scatter_csv(run.model, test_set));
}

std::vector<Variant> parse_variants(const std::vector<std::string>& names, std::vector<Variant> fallback) {
  if (names.empty()) return fallback;
  std::vector<Variant> out;
  for (const auto& n : names) out.push_back(parse_variant(n));
  return out;
}

std::string eval_header() {
  std::string s = "variant,parameter_count";
  for (const auto& c : eval_csv_columns()) s += ',' + c;
  return s + '\n';
}

std::string eval_row(const std::string& variant, std::size_t params, const EvalReport& r) {
  std::string s = variant + ',' + std::to_string(params);
  for (const auto& v : eval_csv_values(r)) s += ',' + opt_cell(v);
  return s + '\n';
}

// ---- subcommands ---------------------------------------------------------

int cmd_gen_data(const CommonFlags& f, std::ostream& out) {
  if (f.data) throw ConfigError("gen-data does not take --data");
  const Experiment e = resolve(f);
  const PixelDataset ds = load_data(e);
  const fs::path path(f.out);
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  save_csv(ds, path);
  write_json(fs::path(path.string() + ".config.json"), to_json(e, "gen-data"));

  std::map<CloudLabel, std::size_t> counts;
  for (auto l : ds.label) ++counts[l];
  out << "wrote " << ds.size() << " pixels (" << e.sensor << ", M=" << ds.feature_dim() << ") to " << f.out << '\n'
      << "clear=" << counts[CloudLabel::Clear] << " liquid=" << counts[CloudLabel::Liquid]
      << " ice=" << counts[CloudLabel::Ice] << '\n';
  return kExitOk;
}

int cmd_train(const CommonFlags& f, const std::string& variant_name, bool dump_scatter, std::ostream& out) {
  Experiment e = resolve(f);
  const Variant v = parse_variant(variant_name);
  e.variants = {std::string(to_string(v))};
  const PixelDataset ds = load_data(e);
  spec_for(e, v, static_cast<int>(ds.feature_dim()));  // config errors surface before any work
  const Splits s = make_splits(e, ds);
  const TrainedRun run = train_and_eval(e, v, s.train, s.val, s.test, e.train, e.seed);
  write_run(fs::path(f.out), e, run, s.test, dump_scatter, "train");
  out << to_string(v) << ": " << run.model.parameter_count() << " parameters, train/val/test " << s.train.size()
      << '/' << s.val.size() << '/' << s.test.size() << ", test acc_bi " << format_double(run.report.acc_bi)
      << ", r2_all " << opt_cell(run.report.r2_all) << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& checkpoint, const CommonFlags& f, const std::string& scatter, std::ostream& out) {
  Experiment e = resolve(f);
  const Checkpoint ck = load_checkpoint(fs::path(checkpoint));
  const PixelDataset ds = load_data(e);
  if (ds.feature_dim() != static_cast<std::size_t>(ck.model.spec.input_dim)) {
    throw ConfigError("dataset has " + std::to_string(ds.feature_dim()) + " features, checkpoint expects " +
                      std::to_string(ck.model.spec.input_dim));
  }
  EvalOptions opts;
  opts.fmg.linear_space = e.fmg_linear_space;
  const EvalReport r = evaluate(ck.model, ds, opts);
  const fs::path path(f.out);
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  write_json(path, to_json(r));
  json cfg = to_json(e, "eval");
  cfg["checkpoint"] = checkpoint;
  write_json(fs::path(path.string() + ".config.json"), cfg);
  if (!scatter.empty()) write_text(fs::path(scatter), scatter_csv(ck.model, ds));
  out << r.variant << ": acc_bi " << format_double(r.acc_bi) << " on " << r.n << " pixels\n";
  return kExitOk;
}

int cmd_ablate(const CommonFlags& f, const std::vector<std::string>& variant_names, bool dump_scatter,
               std::ostream& out) {
  Experiment e = resolve(f);
  const std::vector<Variant> variants =
      parse_variants(variant_names.empty() ? e.variants : variant_names,
                     {Variant::Seq, Variant::MtCr, Variant::MtHcr, Variant::MtHccr, Variant::MtHccar,
                      Variant::MlpBaseline});
  e.variants.clear();
  for (auto v : variants) e.variants.emplace_back(to_string(v));
  const PixelDataset ds = load_data(e);
  for (auto v : variants) spec_for(e, v, static_cast<int>(ds.feature_dim()));
  const Splits s = make_splits(e, ds);

  const fs::path dir(f.out);
  ensure_dir(dir);
  write_json(dir / "config.json", to_json(e, "ablate"));
  std::string table = eval_header();
  json manifest = json::object();
  for (auto v : variants) {
    const TrainedRun run = train_and_eval(e, v, s.train, s.val, s.test, e.train, e.seed);
    write_run(dir / std::string(to_string(v)), e, run, s.test, dump_scatter, "ablate");
    table += eval_row(std::string(to_string(v)), run.model.parameter_count(), run.report);
    manifest[std::string(to_string(v))] = {{"parameter_count", run.model.parameter_count()}};
    // Rewritten after every variant so a later failure keeps earlier rows.
    write_text(dir / "ablation.csv", table);
    write_json(dir / "manifest.json", manifest);
    out << to_string(v) << " done\n";
  }
  out << table;
  return kExitOk;
}

int cmd_kfold(const CommonFlags& f, const std::vector<std::string>& variant_names, std::optional<int> k_flag,
              int jobs, std::ostream& out) {
  Experiment e = resolve(f);
  if (k_flag) e.kfold_k = *k_flag;
  if (e.kfold_k < 2) throw ConfigError("--k must be at least 2");
  if (jobs < 1) throw ConfigError("--jobs must be at least 1");
  e.jobs = jobs;
  const std::vector<Variant> variants = parse_variants(
      variant_names.empty() ? e.variants : variant_names, {kMultiTaskVariants.begin(), kMultiTaskVariants.end()});
  e.variants.clear();
  for (auto v : variants) e.variants.emplace_back(to_string(v));
  const PixelDataset ds = load_data(e);
  for (auto v : variants) spec_for(e, v, static_cast<int>(ds.feature_dim()));
  const auto k = static_cast<std::size_t>(e.kfold_k);
  const auto folds = kfold_indices(ds.size(), k, e.seed);

  const fs::path dir(f.out);
  ensure_dir(dir);
  write_json(dir / "config.json", to_json(e, "kfold"));

  struct FoldRun {
    std::size_t train_size = 0;
    TrainedRun run;
  };
  auto run_fold = [&](Variant v, std::size_t i) {
    std::vector<std::size_t> train_rows;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) train_rows.insert(train_rows.end(), folds[j].begin(), folds[j].end());
    }
    Experiment fe = e;
    fe.train.seed = e.seed + i;
    const PixelDataset train_set = ds.subset(train_rows);
    const PixelDataset test_set = ds.subset(folds[i]);
    return FoldRun{train_rows.size(), train_and_eval(fe, v, train_set, PixelDataset{}, test_set, fe.train, e.seed + i)};
  };

  std::string folds_csv = "variant,fold,train_size,test_size";
  for (const auto& c : eval_csv_columns()) folds_csv += ',' + c;
  folds_csv += '\n';
  std::vector<FoldStats> grid;
  for (auto v : variants) {
    std::vector<FoldRun> runs(k);
    if (jobs == 1) {
      for (std::size_t i = 0; i < k; ++i) runs[i] = run_fold(v, i);
    } else {
      for (std::size_t start = 0; start < k; start += static_cast<std::size_t>(jobs)) {
        std::vector<std::future<FoldRun>> pending;
        for (std::size_t i = start; i < std::min(k, start + static_cast<std::size_t>(jobs)); ++i) {
          pending.push_back(std::async(std::launch::async, run_fold, v, i));
        }
        for (std::size_t i = 0; i < pending.size(); ++i) runs[start + i] = pending[i].get();
      }
    }
    const std::string name(to_string(v));
    std::vector<double> acc, auprc, mse_v, r2_v;
    const double nan = std::nan("");
    for (std::size_t i = 0; i < k; ++i) {
      const auto& r = runs[i].run.report;
      const fs::path fold_dir = dir / name / ("fold_" + std::to_string(i));
      ensure_dir(fold_dir);
      write_json(fold_dir / "eval.json", to_json(r));
      std::string row = name + ',' + std::to_string(i) + ',' + std::to_string(runs[i].train_size) + ',' +
                        std::to_string(folds[i].size());
      for (const auto& c : eval_csv_values(r)) row += ',' + opt_cell(c);
      folds_csv += row + '\n';
      acc.push_back(r.acc_bi);
      auprc.push_back(r.auprc_weighted.value_or(nan));
      mse_v.push_back(r.mse_all.value_or(nan));
      r2_v.push_back(r.r2_all.value_or(nan));
    }
    grid.push_back(fold_stats(acc, name, e.dataset_name, "acc_bi", Direction::HigherBetter));
    grid.push_back(fold_stats(auprc, name, e.dataset_name, "auprc_w", Direction::HigherBetter));
    grid.push_back(fold_stats(mse_v, name, e.dataset_name, "mse", Direction::LowerBetter));
    grid.push_back(fold_stats(r2_v, name, e.dataset_name, "r2", Direction::HigherBetter));
    out << name << ": " << k << " folds done\n";
  }
  write_text(dir / "folds.csv", folds_csv);
  std::ostringstream grid_csv;
  save_stats_grid(grid, grid_csv);
  write_text(dir / "fold_stats.csv", grid_csv.str());
  return kExitOk;
}

int cmd_select(const std::vector<std::string>& grids, const std::string& out_dir,
               const std::vector<std::string>& order_flag, const std::vector<double>& weights_flag,
               double mean_tolerance, std::ostream& out) {
  std::vector<FoldStats> grid;
  for (const auto& g : grids) {
    auto part = load_stats_grid(fs::path(g));
    grid.insert(grid.end(), part.begin(), part.end());
  }
  const std::vector<std::string> order = order_flag.empty() ? default_complexity_order() : order_flag;
  std::map<std::string, double> weights = unit_metric_weights();
  if (!weights_flag.empty()) {
    if (weights_flag.size() != 4) throw ConfigError("--weights takes four values: acc_bi,auprc_w,mse,r2");
    const char* names[] = {"acc_bi", "auprc_w", "mse", "r2"};
    for (std::size_t i = 0; i < 4; ++i) weights[names[i]] = weights_flag[i];
  }
  OneSeOptions opts;
  opts.mean_tolerance = mean_tolerance;
  const SelectionScores scores = select_models(grid, order, weights, opts);
  const std::string table = format_selection_table(scores, grid);

  const fs::path dir(out_dir);
  ensure_dir(dir);
  write_json(dir / "selection.json", to_json(scores, grid));
  write_text(dir / "selection.txt", table);
  write_json(dir / "config.json", json{{"command", "select"},
                                       {"grids", grids},
                                       {"complexity_order", order},
                                       {"weights", weights},
                                       {"mean_tolerance", mean_tolerance}});
  out << table;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-task cloud retrieval experiments", "mthccar"};
  app.require_subcommand(1);

  CommonFlags gen_f, train_f, eval_f, ablate_f, kfold_f;
  std::string train_variant = "MT-HCCAR";
  bool train_scatter = false, ablate_scatter = false;
  std::string eval_checkpoint, eval_scatter;
  std::vector<std::string> ablate_variants, kfold_variants;
  std::optional<int> kfold_k;
  int kfold_jobs = 1;
  std::vector<std::string> select_grids, select_order;
  std::vector<double> select_weights;
  std::string select_out, select_config;
  std::optional<std::uint64_t> select_seed;
  double select_tol = 0.0;

  auto* gen = app.add_subcommand("gen-data", "write a synthetic dataset CSV");
  add_common(gen, gen_f, false);

  auto* tr = app.add_subcommand("train", "train one variant; write checkpoint, history and test report");
  add_common(tr, train_f, true);
  tr->add_option("--variant", train_variant, "SEQ, MT-CR, MT-HCR, MT-HCCR, MT-HCCAR or MLP-BASELINE");
  tr->add_flag("--dump-scatter", train_scatter, "write test-set (y_true, y_pred) CSV");

  auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  add_common(ev, eval_f, false);
  ev->add_flag("--fmg-linear", eval_f.fmg_linear, "FMG relative error on 10^cot instead of log10 cot");
  ev->add_option("--checkpoint", eval_checkpoint, "checkpoint JSON")->required();
  ev->add_option("--dump-scatter", eval_scatter, "write (y_true, y_pred) CSV to this path");

  auto* ab = app.add_subcommand("ablate", "train several variants on identical splits");
  add_common(ab, ablate_f, true);
  ab->add_option("--variants", ablate_variants, "variants to compare (default all six)")->delimiter(',');
  ab->add_flag("--dump-scatter", ablate_scatter, "write per-variant scatter CSVs");

  auto* kf = app.add_subcommand("kfold", "K-fold cross-validation; writes a fold stats grid");
  add_common(kf, kfold_f, true);
  kf->add_option("--variants", kfold_variants, "variants (default the four multi-task ones)")->delimiter(',');
  kf->add_option("--k", kfold_k, "number of folds");
  kf->add_option("--jobs", kfold_jobs, "folds trained concurrently (default 1, sequential)");
  kf->add_option("--dataset-name", kfold_f.dataset_name, "dataset label in the stats grid (default sensor)");

  auto* sel = app.add_subcommand("select", "1SE model selection over a stats grid");
  sel->add_option("--grid", select_grids, "stats grid CSV (repeatable)")->required();
  sel->add_option("--out", select_out, "output directory")->required();
  sel->add_option("--config", select_config, "unused; accepted for symmetry");
  sel->add_option("--seed", select_seed, "unused; accepted for symmetry");
  sel->add_option("--order", select_order, "models from simplest to most complex")->delimiter(',');
  sel->add_option("--weights", select_weights, "metric weights acc_bi,auprc_w,mse,r2")->delimiter(',');
  sel->add_option("--mean-tolerance", select_tol, "slack around the best model's 1SE region");

  std::vector<std::string> argv_store{"mthccar"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_data(gen_f, out);
    if (tr->parsed()) return cmd_train(train_f, train_variant, train_scatter, out);
    if (ev->parsed()) return cmd_eval(eval_checkpoint, eval_f, eval_scatter, out);
    if (ab->parsed()) return cmd_ablate(ablate_f, ablate_variants, ablate_scatter, out);
    if (kf->parsed()) return cmd_kfold(kfold_f, kfold_variants, kfold_k, kfold_jobs, out);
    if (sel->parsed()) return cmd_select(select_grids, select_out, select_order, select_weights, select_tol, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace mthccar
