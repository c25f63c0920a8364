#include <doctest.h>

#include <random>

#include "rulescore/error.hpp"
#include "rulescore/sirus_lite.hpp"
#include "test_support.hpp"

using namespace rulescore;
using namespace rulescore::testing;

namespace {

Dataset sample_data(std::uint64_t seed, TaskKind task = TaskKind::Regression, bool categorical = false) {
  std::mt19937_64 rng(seed);
  return synthetic_data(rng, 150, 6, task, categorical);
}

}  // namespace

TEST_CASE("p0 at the minimum frequency keeps every extracted rule") {
  Dataset d = sample_data(43);
  SirusLiteParams all;
  all.n_trees = 20;
  all.p0 = 1.0 / 20.0;
  all.max_rules = 100000;
  SirusLiteFit loose = fit_sirus_lite(d, all);

  SirusLiteParams strict = all;
  strict.p0 = 0.5;
  SirusLiteFit tight = fit_sirus_lite(d, strict);

  CHECK(loose.rules.size() >= tight.rules.size());
  for (double f : loose.frequencies) CHECK(f >= 1.0 / 20.0 - 1e-12);
  for (double f : tight.frequencies) CHECK(f >= 0.5 - 1e-12);
  // Every rule kept at p0 = 0.5 is also kept at the minimum.
  for (const Rule& r : tight.rules.rules) {
    bool found = false;
    for (const Rule& s : loose.rules.rules) found = found || same_conditions(r, s);
    CHECK(found);
  }
  std::size_t at_least_half = 0;
  for (double f : loose.frequencies) at_least_half += f >= 0.5 - 1e-12 ? 1 : 0;
  CHECK(at_least_half == tight.rules.size());
}

TEST_CASE("a single tree yields its own node rules with frequency 1") {
  Dataset d = sample_data(47);
  SirusLiteParams p;
  p.n_trees = 1;
  p.max_depth = 2;
  p.max_rules = 100;
  SirusLiteFit fit = fit_sirus_lite(d, p);
  CHECK_FALSE(fit.rules.empty());
  CHECK(fit.rules.size() <= 6);  // non-root nodes of a depth-2 tree
  for (double f : fit.frequencies) CHECK(f == 1.0);
}

TEST_CASE("fitting is deterministic for a fixed seed") {
  Dataset d = sample_data(53, TaskKind::Classification, true);
  SirusLiteParams p;
  p.n_trees = 30;
  p.seed = 5;
  SirusLiteFit a = fit_sirus_lite(d, p);
  SirusLiteFit b = fit_sirus_lite(d, p);
  REQUIRE(a.rules.size() == b.rules.size());
  for (std::size_t i = 0; i < a.rules.size(); ++i) CHECK(a.rules.rules[i] == b.rules.rules[i]);
  CHECK(a.frequencies == b.frequencies);
}

TEST_CASE("selection order, cap and rule boundaries") {
  Dataset d = sample_data(59);
  SirusLiteParams p;
  p.n_trees = 50;
  p.max_rules = 5;
  SirusLiteFit fit = fit_sirus_lite(d, p);
  CHECK(fit.rules.size() <= 5);
  CHECK(std::is_sorted(fit.frequencies.rbegin(), fit.frequencies.rend()));

  std::vector<std::vector<double>> cuts;
  for (std::size_t f = 0; f < d.features(); ++f) {
    auto col = d.column(f);
    cuts.push_back(quantile_cuts(col, p.q));
  }
  for (const Rule& r : fit.rules.rules) {
    CHECK(canonicalize(r) == r);
    CHECK(rule_length(r) <= p.max_depth);
    for (const Condition& c : r.conditions) {
      const Interval& iv = c.interval();
      const auto& fc = cuts[c.feature];
      if (iv.lower != -kInf) CHECK(std::find(fc.begin(), fc.end(), iv.lower) != fc.end());
      if (iv.upper != kInf) CHECK(std::find(fc.begin(), fc.end(), iv.upper) != fc.end());
    }
  }
}

TEST_CASE("rule predictions are activation-set means") {
  Dataset d = sample_data(61);
  SirusLiteParams p;
  p.n_trees = 25;
  SirusLiteFit fit = fit_sirus_lite(d, p);
  for (const Rule& r : fit.rules.rules) {
    double sum = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      auto x = d.observation(i);
      if (rule_activated(r, x)) {
        sum += d.target()[i];
        ++k;
      }
    }
    REQUIRE(k > 0);
    CHECK(r.prediction == doctest::Approx(sum / static_cast<double>(k)).epsilon(1e-12));
  }
}

TEST_CASE("invalid parameters") {
  Dataset d = sample_data(67);
  SirusLiteParams p;
  p.p0 = 0.0;
  CHECK_THROWS_AS(fit_sirus_lite(d, p), Error);
  p.p0 = 0.1;
  p.n_trees = 0;
  CHECK_THROWS_AS(fit_sirus_lite(d, p), Error);
}
