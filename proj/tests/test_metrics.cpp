#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mthccar/error.hpp"
#include "mthccar/metrics/evaluate.hpp"
#include "mthccar/metrics/metrics.hpp"
#include "support.hpp"

using namespace mthccar;

namespace {

double auprc(const std::vector<double>& s, const std::vector<bool>& l) { return auprc_class(s, l); }

struct Instance {
  std::vector<double> scores;
  std::vector<bool> labels;
};

// Scores drawn from a coarse grid so that ties occur often.
Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 32);
  std::uniform_int_distribution<int> level(0, 9);
  std::bernoulli_distribution coin(0.4);
  Instance in;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    in.scores.push_back(level(rng) / 10.0);
    in.labels.push_back(coin(rng));
  }
  in.labels[0] = true;
  return in;
}

}  // namespace

TEST_CASE("acc_binary examples") {
  CHECK(acc_binary({true, false, true}, {true, false, true}) == 1.0);
  CHECK(acc_binary({true, true, false, false}, {true, false, false, true}) == 0.5);
  CHECK_THROWS_AS(acc_binary({}, {}), DimensionError);
  CHECK_THROWS_AS(acc_binary({true}, {true, false}), DimensionError);
}

TEST_CASE("auprc_class examples") {
  CHECK(auprc({0.9, 0.1}, {true, false}) == 1.0);
  CHECK(auprc({0.1, 0.9}, {true, false}) == 0.5);
  CHECK(auprc({0.3, 0.2, 0.8}, {true, true, true}) == 1.0);
  CHECK(auprc({0.5, 0.5}, {true, false}) == 0.5);  // tie enters at one threshold
  CHECK_THROWS_AS(auprc({0.2, 0.4}, {false, false}), UndefinedMetricError);
}

TEST_CASE("auprc_class is invariant under monotone score transforms") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Instance in = random_instance(rng);
    std::vector<double> t;
    for (double s : in.scores) t.push_back(std::exp(3.0 * s) - 7.0);
    CHECK(auprc(t, in.labels) == auprc(in.scores, in.labels));
  }
}

TEST_CASE("auprc_weighted degenerate pooling") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 30; ++k) {
    const Instance in = random_instance(rng);
    const double single = auprc(in.scores, in.labels);
    CHECK(auprc_weighted({in.scores}, {in.labels}) == doctest::Approx(single).epsilon(1e-12));
    CHECK(auprc_weighted({in.scores, in.scores, in.scores}, {in.labels, in.labels, in.labels}) ==
          doctest::Approx(single).epsilon(1e-12));
  }
  CHECK(auprc_weighted({{0.9, 0.1}, {0.8, 0.2}}, {{true, false}, {true, false}}) == 1.0);
  CHECK_THROWS_AS(auprc_weighted({{0.1}}, {{false}}), UndefinedMetricError);
}

TEST_CASE("auprc_weighted on an 8-pixel two-class case matches pooled enumeration") {
  const std::vector<std::vector<double>> s{{0.9, 0.7, 0.7, 0.4, 0.3, 0.2, 0.6, 0.1},
                                           {0.1, 0.3, 0.8, 0.6, 0.7, 0.5, 0.4, 0.9}};
  const std::vector<std::vector<bool>> l{{true, false, true, false, false, true, true, false},
                                         {false, true, false, true, true, false, false, true}};
  CHECK(auprc_weighted(s, l) == doctest::Approx(oracle::auprc_micro(s, l)).epsilon(1e-14));
}

TEST_CASE("PR metrics match threshold-enumeration oracles on random instances") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const Instance a = random_instance(rng);
    CHECK(std::abs(auprc(a.scores, a.labels) - oracle::auprc(a.scores, a.labels)) < 1e-12);
    Instance b = random_instance(rng);
    b.labels[0] = false;
    std::vector<std::vector<double>> s{a.scores, b.scores};
    std::vector<std::vector<bool>> l{a.labels, b.labels};
    CHECK(std::abs(auprc_weighted(s, l) - oracle::auprc_micro(s, l)) < 1e-12);
  }
}

TEST_CASE("mse and r2 examples") {
  const std::vector<double> y{0, 1, 2}, yh{0, 1, 1};
  CHECK(mse(y, yh) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r2(y, yh) == 0.5);
  CHECK(mse(y, y) == 0.0);
  CHECK(r2(y, y) == 1.0);
  const std::vector<double> mean{1, 1, 1};
  CHECK(r2(y, mean) == 0.0);
  CHECK_THROWS_AS(r2(mean, y), UndefinedMetricError);
  CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}), DimensionError);
}

TEST_CASE("mse and r2 match direct summation and ignore pixel order") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const std::size_t len = 2 + k % 31;
    std::vector<double> y(len), yh(len);
    for (std::size_t i = 0; i < len; ++i) {
      y[i] = n(rng);
      yh[i] = y[i] + 0.3 * n(rng);
    }
    CHECK(std::abs(mse(y, yh) - oracle::mse(y, yh)) < 1e-12);
    CHECK(std::abs(r2(y, yh) - oracle::r2(y, yh)) < 1e-10);
    std::vector<std::size_t> perm(len);
    for (std::size_t i = 0; i < len; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> py, pyh;
    for (auto p : perm) {
      py.push_back(y[p]);
      pyh.push_back(yh[p]);
    }
    CHECK(mse(py, pyh) == doctest::Approx(mse(y, yh)).epsilon(1e-14));
    CHECK(r2(py, pyh) == doctest::Approx(r2(y, yh)).epsilon(1e-12));
  }
}

TEST_CASE("fmg examples and eligibility") {
  using L = CloudLabel;
  const std::vector<double> y{1.0, 1.0, 0.5, 0.7, 2.0};
  const std::vector<double> yh{1.2, 1.3, 0.0, 0.0, 1.4};
  const FmgResult r = fmg(y, yh, {L::Liquid, L::Liquid, L::Liquid, L::Ice, L::Ice});
  CHECK(r.eligible_liquid == 2);
  CHECK(r.met_liquid == 1);
  REQUIRE(r.liquid.has_value());
  CHECK(*r.liquid == 0.5);
  CHECK(r.eligible_ice == 1);  // y = 0.7 sits on the cutoff and is excluded
  CHECK(*r.ice == 1.0);        // |2.0 - 1.4| / 2.0 = 0.3 < 0.35

  const FmgResult none = fmg(std::vector<double>{0.5}, std::vector<double>{0.5}, {L::Ice});
  CHECK_FALSE(none.liquid.has_value());
  CHECK_FALSE(none.ice.has_value());

  FmgOptions linear;
  linear.linear_space = true;
  // 10^1 = 10 vs 10^1.05 = 11.22: relative error 0.122 passes in linear space too.
  CHECK(*fmg(std::vector<double>{1.0}, std::vector<double>{1.05}, {L::Liquid}, linear).liquid == 1.0);
  // 10 vs 10^1.2 = 15.85: 0.585 fails in linear space but 0.2 passes in log space.
  CHECK(*fmg(std::vector<double>{1.0}, std::vector<double>{1.2}, {L::Liquid}, linear).liquid == 0.0);
  CHECK(*fmg(std::vector<double>{1.0}, std::vector<double>{1.2}, {L::Liquid}).liquid == 1.0);
}

TEST_CASE("fmg matches the direct oracle on random instances") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 2.5);
  std::normal_distribution<double> n(0.0, 0.3);
  std::bernoulli_distribution coin(0.5);
  for (int k = 0; k < 200; ++k) {
    const std::size_t len = 1 + k % 32;
    std::vector<double> y(len), yh(len);
    std::vector<CloudLabel> ph(len);
    std::vector<int> iph(len);
    for (std::size_t i = 0; i < len; ++i) {
      y[i] = u(rng);
      yh[i] = y[i] + n(rng);
      const bool liq = coin(rng);
      ph[i] = liq ? CloudLabel::Liquid : CloudLabel::Ice;
      iph[i] = liq ? 1 : 2;
    }
    const FmgResult r = fmg(y, yh, ph);
    const auto [ol, oi] = oracle::fmg(y, yh, iph);
    CHECK(r.liquid.value_or(-1.0) == doctest::Approx(ol).epsilon(1e-12));
    CHECK(r.ice.value_or(-1.0) == doctest::Approx(oi).epsilon(1e-12));
  }
}

TEST_CASE("evaluate produces a complete report and a flat CSV row") {
  const PixelDataset ds = support::toy_data(200, 9);
  const Model m = build_model(ArchitectureSpec::for_variant(Variant::MtHccar, ds.feature_dim()), 1);
  const EvalReport r = evaluate(m, ds);
  CHECK(r.n == 200);
  CHECK(r.auprc_per_class.size() == 4);
  CHECK(r.auprc_weighted.has_value());
  CHECK(r.acc_bi >= 0.0);
  CHECK(r.acc_bi <= 1.0);
  CHECK(eval_csv_columns().size() == eval_csv_values(r).size());
  const auto j = to_json(r);
  CHECK(j.contains("fmg_liquid"));
  CHECK(j.contains("auprc_weighted"));
}
