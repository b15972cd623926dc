#include "mthccar/metrics/evaluate.hpp"

#include "mthccar/error.hpp"

namespace mthccar {
namespace {

template <class F>
std::optional<double> defined_or_empty(F&& f) {
  try {
    return f();
  } catch (const UndefinedMetricError&) {
    return std::nullopt;
  } catch (const DimensionError&) {
    return std::nullopt;
  }
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

ClassScores class_scores(const ModelOutputs& o, const ArchitectureSpec& spec) {
  const bool flat = spec.variant == Variant::MtCr || spec.variant == Variant::MlpBaseline;
  ClassScores s{o.u_cloud, o.u_clear, o.u_liquid, o.u_ice};
  if (!flat) {
    s.liquid = o.u_cloud.cwiseProduct(o.u_liquid);
    s.ice = o.u_cloud.cwiseProduct(o.u_ice);
  }
  return s;
}

EvalReport evaluate_outputs(const ModelOutputs& o, const ArchitectureSpec& spec, const PixelDataset& ds,
                            const EvalOptions& options) {
  const std::size_t n = ds.size();
  if (n == 0) throw DataError("cannot evaluate an empty dataset");
  if (static_cast<std::size_t>(o.u_cloud.size()) != n) throw DimensionError("outputs and dataset differ in length");

  EvalReport r;
  r.variant = std::string(to_string(spec.variant));
  r.n = n;
  const Predictions pred = predictions_from_outputs(o, spec);

  std::vector<bool> is_cloud(n), is_clear(n), is_liquid(n), is_ice(n);
  for (std::size_t i = 0; i < n; ++i) {
    is_cloud[i] = is_cloudy(ds.label[i]);
    is_clear[i] = !is_cloud[i];
    is_liquid[i] = ds.label[i] == CloudLabel::Liquid;
    is_ice[i] = ds.label[i] == CloudLabel::Ice;
  }
  r.acc_bi = acc_binary(is_cloud, pred.cloud_hat);

  const ClassScores s = class_scores(o, spec);
  const std::vector<std::vector<double>> scores{to_std(s.cloudy), to_std(s.clear), to_std(s.liquid),
                                                to_std(s.ice)};
  const std::vector<std::vector<bool>> labels{is_cloud, is_clear, is_liquid, is_ice};
  const char* names[] = {"cloudy", "clear", "liquid", "ice"};
  for (std::size_t c = 0; c < 4; ++c) {
    r.auprc_per_class[names[c]] = defined_or_empty([&] { return auprc_class(scores[c], labels[c]); });
  }
  r.auprc_weighted = defined_or_empty([&] { return auprc_weighted(scores, labels); });

  std::vector<double> y_all, yh_all, y_liq, yh_liq, y_ice, yh_ice;
  std::vector<CloudLabel> phase;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_cloud[i]) continue;
    const double y = *ds.cot_log10[i];
    const double yh = o.y_cot_hat(static_cast<Eigen::Index>(i));
    y_all.push_back(y);
    yh_all.push_back(yh);
    phase.push_back(ds.label[i]);
    (is_liquid[i] ? y_liq : y_ice).push_back(y);
    (is_liquid[i] ? yh_liq : yh_ice).push_back(yh);
  }
  r.n_cloudy = y_all.size();
  r.mse_all = defined_or_empty([&] { return mse(y_all, yh_all); });
  r.mse_liquid = defined_or_empty([&] { return mse(y_liq, yh_liq); });
  r.mse_ice = defined_or_empty([&] { return mse(y_ice, yh_ice); });
  r.r2_all = defined_or_empty([&] { return r2(y_all, yh_all); });
  r.r2_liquid = defined_or_empty([&] { return r2(y_liq, yh_liq); });
  r.r2_ice = defined_or_empty([&] { return r2(y_ice, yh_ice); });
  if (!y_all.empty()) r.fmg = fmg(y_all, yh_all, phase, options.fmg);
  return r;
}

EvalReport evaluate(const Model& model, const PixelDataset& ds, const EvalOptions& options) {
  return evaluate_outputs(forward(model, ds.features(), /*train_mode=*/false), model.spec, ds, options);
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json per_class = nlohmann::json::object();
  for (const auto& [k, v] : r.auprc_per_class) per_class[k] = opt(v);
  return nlohmann::json{
      {"variant", r.variant},
      {"n", r.n},
      {"n_cloudy", r.n_cloudy},
      {"acc_bi", r.acc_bi},
      {"auprc_per_class", per_class},
      {"auprc_weighted", opt(r.auprc_weighted)},
      {"mse_all", opt(r.mse_all)},
      {"mse_liquid", opt(r.mse_liquid)},
      {"mse_ice", opt(r.mse_ice)},
      {"r2_all", opt(r.r2_all)},
      {"r2_liquid", opt(r.r2_liquid)},
      {"r2_ice", opt(r.r2_ice)},
      {"fmg_liquid", opt(r.fmg.liquid)},
      {"fmg_ice", opt(r.fmg.ice)},
      {"fmg_eligible_count", {{"liquid", r.fmg.eligible_liquid}, {"ice", r.fmg.eligible_ice}}},
      {"fmg_met_count", {{"liquid", r.fmg.met_liquid}, {"ice", r.fmg.met_ice}}},
  };
}

std::vector<std::string> eval_csv_columns() {
  return {"acc_bi",     "auprc_cloudy", "auprc_clear", "auprc_liquid", "auprc_ice",   "auprc_weighted",
          "mse_all",    "mse_liquid",   "mse_ice",     "r2_all",       "r2_liquid",   "r2_ice",
          "fmg_liquid", "fmg_ice"};
}

std::vector<std::optional<double>> eval_csv_values(const EvalReport& r) {
  auto cls = [&](const char* k) {
    const auto it = r.auprc_per_class.find(k);
    return it == r.auprc_per_class.end() ? std::nullopt : it->second;
  };
  return {r.acc_bi,     cls("cloudy"),    cls("clear"),  cls("liquid"), cls("ice"),      r.auprc_weighted,
          r.mse_all,    r.mse_liquid,     r.mse_ice,     r.r2_all,      r.r2_liquid,     r.r2_ice,
          r.fmg.liquid, r.fmg.ice};
}

}  // namespace mthccar
