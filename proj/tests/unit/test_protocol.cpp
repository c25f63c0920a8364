#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "rulescore/error.hpp"
#include "rulescore/protocol.hpp"
#include "test_support.hpp"

using namespace rulescore;
using namespace rulescore::testing;

namespace {

AlgorithmSpec cart_spec(const std::string& id, std::size_t leaves = 20) {
  AlgorithmSpec s = parse_algorithm("cart");
  s.id = id;
  s.cart.max_leaf_nodes = leaves;
  return s;
}

AlgorithmSpec sirus_spec() {
  AlgorithmSpec s = parse_algorithm("sirus-lite");
  s.sirus.n_trees = 30;
  return s;
}

}  // namespace

TEST_CASE("kfold_split fold sizes and determinism") {
  FoldPlan ten = kfold_split(10, 10, 1);
  for (std::size_t f = 0; f < 10; ++f) CHECK(ten.test_rows(f).size() == 1);

  FoldPlan eleven = kfold_split(11, 10, 1);
  std::multiset<std::size_t> sizes;
  for (std::size_t f = 0; f < 10; ++f) sizes.insert(eleven.test_rows(f).size());
  CHECK(sizes.count(2) == 1);
  CHECK(sizes.count(1) == 9);

  CHECK(kfold_split(57, 5, 9).assignments == kfold_split(57, 5, 9).assignments);
  CHECK(kfold_split(57, 5, 9).assignments != kfold_split(57, 5, 10).assignments);

  FoldPlan p = kfold_split(23, 4, 3);
  for (std::size_t f = 0; f < 4; ++f) CHECK(p.test_rows(f).size() + p.train_rows(f).size() == 23);

  CHECK_THROWS_AS(kfold_split(5, 1, 0), Error);
  CHECK_THROWS_AS(kfold_split(5, 6, 0), Error);
}

TEST_CASE("stability_split halves") {
  std::mt19937_64 rng(79);
  Dataset d100 = synthetic_data(rng, 100, 2, TaskKind::Regression);
  auto [a, b] = stability_split(d100, 4);
  CHECK(a.rows() == 50);
  CHECK(b.rows() == 50);

  Dataset d101 = synthetic_data(rng, 101, 2, TaskKind::Regression);
  auto [c, e] = stability_split(d101, 4);
  CHECK(c.rows() == 50);
  CHECK(e.rows() == 51);

  auto h1 = stability_halves(101, 4);
  auto h2 = stability_halves(101, 4);
  CHECK(h1 == h2);
  std::set<std::size_t> all(h1.first.begin(), h1.first.end());
  all.insert(h1.second.begin(), h1.second.end());
  CHECK(all.size() == 101);

  CHECK_THROWS_AS(stability_halves(3, 0), Error);
}

TEST_CASE("parse_algorithm") {
  CHECK(parse_algorithm("cart").source == AlgorithmSource::BuiltinCart);
  CHECK(parse_algorithm("sirus-lite").id == "sirus-lite");
  AlgorithmSpec r = parse_algorithm("rules:out/ripper_{fold}.json@halves:out/ripper_{fold}_h{half}.json");
  CHECK(r.source == AlgorithmSource::ImportedRules);
  CHECK(r.id == "ripper");
  CHECK(r.rules_path == "out/ripper_{fold}.json");
  CHECK(r.halves_path == "out/ripper_{fold}_h{half}.json");
  CHECK_THROWS_AS(parse_algorithm("forest"), Error);
}

TEST_CASE("validate rejects too few algorithms") {
  EvaluationConfig cfg;
  cfg.algorithms = {cart_spec("a")};
  try {
    validate(cfg);
    FAIL("expected FewerThanTwoAlgorithms");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FewerThanTwoAlgorithms);
  }
  cfg.algorithms.push_back(cart_spec("a"));
  CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("identical deterministic algorithms score identically") {
  std::mt19937_64 rng(83);
  Dataset d = synthetic_data(rng, 120, 4, TaskKind::Regression);
  EvaluationConfig cfg;
  cfg.k = 3;
  cfg.algorithms = {cart_spec("first"), cart_spec("second")};
  ScoreReport rep = evaluate({d}, cfg);
  REQUIRE(rep.per_fold.size() == 6);
  for (std::size_t i = 0; i < rep.per_fold.size(); i += 2) {
    const ScoreRow& a = rep.per_fold[i];
    const ScoreRow& b = rep.per_fold[i + 1];
    CHECK(a.predictivity == b.predictivity);
    CHECK(a.stability == b.stability);
    CHECK(a.interpretability_index == b.interpretability_index);
    CHECK(a.simplicity == 1.0);
    CHECK(b.simplicity == 1.0);
  }
}

TEST_CASE("cart vs sirus-lite on two folds: scores in bounds, means and aggregation") {
  std::mt19937_64 rng(89);
  Dataset reg = synthetic_data(rng, 150, 5, TaskKind::Regression, true, "reg");
  Dataset cls = synthetic_data(rng, 150, 5, TaskKind::Classification, false, "cls");
  EvaluationConfig cfg;
  cfg.k = 2;
  cfg.seed = 17;
  cfg.algorithms = {cart_spec("cart"), sirus_spec()};
  ScoreReport rep = evaluate({reg, cls}, cfg);
  REQUIRE(rep.per_fold.size() == 8);
  for (const ScoreRow& r : rep.per_fold) {
    REQUIRE(r.ok);
    CHECK(r.predictivity <= 1.0);
    REQUIRE(r.stability.has_value());
    REQUIRE(r.simplicity.has_value());
    REQUIRE(r.interpretability.has_value());
    CHECK(*r.stability >= 0.0);
    CHECK(*r.stability <= 1.0);
    CHECK(*r.simplicity >= 0.0);
    CHECK(*r.simplicity <= 1.0);
    CHECK(*r.interpretability >= 0.0);
    CHECK(*r.interpretability <= 1.0);
    double expect = (std::max(r.predictivity, 0.0) + *r.stability + *r.simplicity) / 3.0;
    CHECK(std::abs(*r.interpretability - expect) <= 1e-12);
  }
  REQUIRE(rep.means.size() == 4);
  for (const MeanRow& m : rep.means) {
    double p = 0, s = 0, i = 0;
    int n = 0;
    for (const ScoreRow& r : rep.per_fold) {
      if (r.dataset != m.dataset || r.algorithm != m.algorithm) continue;
      p += r.predictivity;
      s += *r.stability;
      i += *r.interpretability;
      ++n;
    }
    CHECK(n == 2);
    CHECK(std::abs(*m.predictivity - p / n) <= 1e-12);
    CHECK(std::abs(*m.stability - s / n) <= 1e-12);
    CHECK(std::abs(*m.interpretability - i / n) <= 1e-12);
  }
  CHECK(rep.correlation_rows == 8);
  REQUIRE(rep.correlations.has_value());
  if ((*rep.correlations)[0][0]) CHECK(*(*rep.correlations)[0][0] == 1.0);

  cfg.jobs = 3;
  ScoreReport threaded = evaluate({reg, cls}, cfg);
  for (std::size_t i = 0; i < rep.per_fold.size(); ++i) {
    CHECK(threaded.per_fold[i].predictivity == rep.per_fold[i].predictivity);
    CHECK(threaded.per_fold[i].stability == rep.per_fold[i].stability);
  }
}

TEST_CASE("failing imported rules are excluded with a warning") {
  std::mt19937_64 rng(97);
  Dataset d = synthetic_data(rng, 60, 3, TaskKind::Regression);
  EvaluationConfig cfg;
  cfg.k = 2;
  cfg.algorithms = {cart_spec("a"), cart_spec("b"), parse_algorithm("rules:/nonexistent/missing_{fold}.json")};
  ScoreReport rep = evaluate({d}, cfg);
  std::size_t failed = 0;
  for (const ScoreRow& r : rep.per_fold) {
    if (r.algorithm == "missing") {
      CHECK_FALSE(r.ok);
      ++failed;
    }
  }
  CHECK(failed == 2);
  CHECK_FALSE(rep.warnings.empty());
  for (const MeanRow& m : rep.means) {
    if (m.algorithm == "missing") {
      CHECK(m.folds == 0);
      CHECK_FALSE(m.predictivity.has_value());
    }
  }
}

TEST_CASE("pearson and score_correlations") {
  std::vector<double> a{1, 2, 3, 4}, b{2, 4, 6, 8}, c{4, 3, 2, 1}, k{5, 5, 5, 5};
  CHECK(*pearson(a, b) == doctest::Approx(1.0));
  CHECK(*pearson(a, c) == doctest::Approx(-1.0));
  CHECK_FALSE(pearson(a, k).has_value());

  std::vector<std::array<double, 3>> rows;
  for (std::size_t i = 0; i < 4; ++i) rows.push_back({a[i], b[i], k[i]});
  CorrelationMatrix m = score_correlations(rows);
  CHECK(*m[0][1] == doctest::Approx(1.0));
  CHECK(*m[0][0] == 1.0);
  CHECK_FALSE(m[0][2].has_value());
  CHECK_FALSE(m[2][2].has_value());
  CHECK_THROWS_AS(score_correlations({{1, 2, 3}}), Error);
}
