#include "rulescore/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "rulescore/error.hpp"
#include "rulescore/interchange.hpp"
#include "rulescore/predict.hpp"
#include "rulescore/random.hpp"
#include "rulescore/tree.hpp"

namespace rulescore {

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) rows.push_back(i);
  }
  return rows;
}

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) throw Error(ErrorCode::BadK, fmt::format("need 2 <= k <= n, got k={} n={}", k, n));
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(n, 0);
  auto order = permutation(n, seed);
  for (std::size_t pos = 0; pos < n; ++pos) plan.assignments[order[pos]] = pos % k;
  return plan;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stability_halves(std::size_t n, std::uint64_t seed) {
  if (n < 4) throw Error(ErrorCode::TooSmall, fmt::format("stability split needs >= 4 rows, got {}", n));
  auto order = permutation(n, seed);
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  std::vector<std::size_t> first(order.begin(), order.begin() + half);
  std::vector<std::size_t> second(order.begin() + half, order.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {std::move(first), std::move(second)};
}

std::pair<Dataset, Dataset> stability_split(const Dataset& train, std::uint64_t seed) {
  auto [first, second] = stability_halves(train.rows(), seed);
  return {train.subset(first), train.subset(second)};
}

AlgorithmSpec parse_algorithm(const std::string& token) {
  AlgorithmSpec spec;
  if (token == "cart") {
    spec.id = "cart";
    spec.source = AlgorithmSource::BuiltinCart;
  } else if (token == "sirus-lite") {
    spec.id = "sirus-lite";
    spec.source = AlgorithmSource::BuiltinSirusLite;
  } else if (token.rfind("rules:", 0) == 0) {
    spec.source = AlgorithmSource::ImportedRules;
    std::string rest = token.substr(6);
    auto at = rest.find("@halves:");
    if (at != std::string::npos) {
      spec.halves_path = rest.substr(at + 8);
      rest = rest.substr(0, at);
    }
    if (rest.empty()) throw Error(ErrorCode::InvalidArgument, fmt::format("'{}': missing rules path", token));
    spec.rules_path = rest;
    std::string stem = std::filesystem::path(rest).stem().string();
    auto brace = stem.find('{');
    if (brace != std::string::npos) stem = stem.substr(0, brace);
    while (!stem.empty() && (stem.back() == '_' || stem.back() == '-')) stem.pop_back();
    spec.id = stem.empty() ? "rules" : stem;
  } else {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("unknown algorithm '{}', expected cart, sirus-lite or rules:FILE", token));
  }
  return spec;
}

void validate(const EvaluationConfig& cfg) {
  if (cfg.algorithms.size() < 2) {
    throw Error(ErrorCode::FewerThanTwoAlgorithms,
                fmt::format("simplicity is relative: need >= 2 algorithms, got {}", cfg.algorithms.size()));
  }
  std::set<std::string> ids;
  for (const auto& a : cfg.algorithms) {
    if (!ids.insert(a.id).second) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("duplicate algorithm id '{}'", a.id));
    }
  }
  if (cfg.k < 2) throw Error(ErrorCode::BadK, fmt::format("folds={} must be >= 2", cfg.k));
  if (cfg.q < 2) throw Error(ErrorCode::InvalidArgument, fmt::format("q={} must be >= 2", cfg.q));
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "correlation columns differ in length");
  const std::size_t n = a.size();
  if (n < 2) throw Error(ErrorCode::InsufficientRows, fmt::format("correlation needs >= 2 rows, got {}", n));
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = a[i] - ma;
    double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  double r = sab / std::sqrt(saa * sbb);
  return std::clamp(r, -1.0, 1.0);
}

CorrelationMatrix score_correlations(const std::vector<std::array<double, 3>>& rows) {
  if (rows.size() < 2) {
    throw Error(ErrorCode::InsufficientRows, fmt::format("correlation needs >= 2 rows, got {}", rows.size()));
  }
  std::array<std::vector<double>, 3> cols;
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < 3; ++j) cols[j].push_back(r[j]);
  }
  CorrelationMatrix m;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i; j < 3; ++j) {
      std::optional<double> r = pearson(cols[i], cols[j]);
      if (i == j && r) r = 1.0;
      m[i][j] = r;
      m[j][i] = r;
    }
  }
  return m;
}

std::uint64_t stability_seed(std::uint64_t seed, const std::string& dataset, std::size_t fold) {
  return derive_seed({seed, fnv1a(dataset), fold, 0x5eedULL});
}

std::uint64_t fold_plan_seed(std::uint64_t seed, const std::string& dataset) {
  return derive_seed({seed, fnv1a(dataset), 0xf01dULL});
}

namespace {

std::uint64_t learner_seed(std::uint64_t seed, const std::string& dataset, std::size_t fold,
                           const std::string& algorithm) {
  return derive_seed({seed, fnv1a(dataset), fold, fnv1a(algorithm)});
}

std::string substitute(std::string pattern, const std::string& key, const std::string& value) {
  for (auto pos = pattern.find(key); pos != std::string::npos; pos = pattern.find(key, pos + value.size())) {
    pattern.replace(pos, key.size(), value);
  }
  return pattern;
}

RuleLearner builtin_learner(const AlgorithmSpec& spec, std::size_t q) {
  if (spec.source == AlgorithmSource::BuiltinCart) {
    CartParams params = spec.cart;
    return [params](const Dataset& d, std::uint64_t seed) {
      CartParams p = params;
      p.seed = seed;
      return tree_to_rules(fit_cart(d, p));
    };
  }
  SirusLiteParams params = spec.sirus;
  params.q = q;
  return [params](const Dataset& d, std::uint64_t seed) {
    SirusLiteParams p = params;
    p.seed = seed;
    return fit_sirus_lite(d, p).rules;
  };
}

struct FoldTask {
  std::size_t dataset = 0;
  std::size_t fold = 0;
};

struct FoldResult {
  std::vector<ScoreRow> rows;
  std::vector<std::string> warnings;
};

FoldResult run_fold(const Dataset& ds, const FoldPlan& plan, std::size_t fold, const EvaluationConfig& cfg) {
  FoldResult out;
  const Dataset train = ds.subset(plan.train_rows(fold));
  const Dataset test = ds.subset(plan.test_rows(fold));
  const auto [half1, half2] = stability_split(train, stability_seed(cfg.seed, ds.name(), fold));

  const Contrast contrast = contrast_for(ds.task());
  const double baseline = baseline_prediction(train.target(), ds.task());
  const std::vector<double> baseline_preds(test.rows(), baseline);
  const double baseline_risk = empirical_risk(baseline_preds, test.target(), contrast);

  ImportOptions import_options;
  import_options.schema = &ds.schema();
  import_options.classes = ds.classes();
  const std::string fold_text = std::to_string(fold);

  std::map<std::string, std::size_t> ints;
  for (const AlgorithmSpec& spec : cfg.algorithms) {
    ScoreRow row;
    row.dataset = ds.name();
    row.algorithm = spec.id;
    row.fold = fold;
    try {
      RuleSet rs;
      if (spec.source == AlgorithmSource::ImportedRules) {
        rs = import_rules(substitute(spec.rules_path, "{fold}", fold_text), import_options);
        if (rs.task != ds.task()) {
          throw Error(ErrorCode::SchemaError, fmt::format("rule set task '{}' does not match dataset task '{}'",
                                                          to_string(rs.task), to_string(ds.task())));
        }
        if (!spec.halves_path.empty()) {
          std::string pattern = substitute(spec.halves_path, "{fold}", fold_text);
          RuleSet r1 = import_rules(substitute(pattern, "{half}", "1"), import_options);
          RuleSet r2 = import_rules(substitute(pattern, "{half}", "2"), import_options);
          row.stability = q_stability(r1, half1, r2, half2, cfg.q);
        }
      } else {
        RuleLearner learner = builtin_learner(spec, cfg.q);
        const std::uint64_t seed = learner_seed(cfg.seed, ds.name(), fold, spec.id);
        rs = learner(train, seed);
        row.stability = q_stability(learner, half1, half2, cfg.q, seed);
      }
      row.rules = rs.size();
      row.interpretability_index = interpretability_index(rs);
      const std::vector<double> preds = predict_ruleset(rs, test);
      row.predictivity = predictivity(empirical_risk(preds, test.target(), contrast), baseline_risk);
      ints[spec.id] = row.interpretability_index;
      if (!row.stability) {
        out.warnings.push_back(fmt::format("{} fold {} {}: stability unavailable (no half-fit rule sets supplied)",
                                           ds.name(), fold, spec.id));
      }
    } catch (const Error& e) {
      row.ok = false;
      row.error = fmt::format("{}: {}", to_string(e.code()), e.what());
      row.stability.reset();
      out.warnings.push_back(fmt::format("{} fold {} {}: excluded: {}", ds.name(), fold, spec.id, row.error));
    }
    out.rows.push_back(std::move(row));
  }

  std::map<std::string, double> simplicity;
  try {
    simplicity = simplicity_scores(ints);
  } catch (const Error& e) {
    out.warnings.push_back(fmt::format("{} fold {}: simplicity unavailable: {}", ds.name(), fold, e.what()));
  }
  for (ScoreRow& row : out.rows) {
    if (!row.ok) continue;
    auto it = simplicity.find(row.algorithm);
    if (it != simplicity.end()) row.simplicity = it->second;
    if (row.stability && row.simplicity) {
      row.interpretability = interpretability(row.predictivity, *row.stability, *row.simplicity, cfg.weights);
    }
  }
  return out;
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

ScoreReport evaluate(const std::vector<Dataset>& datasets, const EvaluationConfig& cfg) {
  validate(cfg);
  if (datasets.empty()) throw Error(ErrorCode::EmptyData, "no dataset to evaluate");
  std::set<std::string> names;
  for (const Dataset& ds : datasets) {
    if (!names.insert(ds.name()).second) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("duplicate dataset name '{}'", ds.name()));
    }
  }

  std::vector<FoldPlan> plans;
  std::vector<FoldTask> tasks;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    plans.push_back(kfold_split(datasets[d].rows(), cfg.k, fold_plan_seed(cfg.seed, datasets[d].name())));
    for (std::size_t f = 0; f < cfg.k; ++f) tasks.push_back({d, f});
  }

  std::vector<FoldResult> results(tasks.size());
  std::vector<std::exception_ptr> failures(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const FoldTask& t = tasks[i];
        results[i] = run_fold(datasets[t.dataset], plans[t.dataset], t.fold, cfg);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::size_t jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.jobs;
  jobs = std::min(jobs, tasks.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  ScoreReport report;
  for (const Dataset& ds : datasets) report.datasets.push_back(ds.name());
  for (const AlgorithmSpec& a : cfg.algorithms) report.algorithms.push_back(a.id);
  for (FoldResult& r : results) {
    for (ScoreRow& row : r.rows) report.per_fold.push_back(std::move(row));
    for (std::string& w : r.warnings) report.warnings.push_back(std::move(w));
  }

  for (const std::string& ds : report.datasets) {
    for (const std::string& alg : report.algorithms) {
      std::vector<double> pred, stab, simp, interp;
      MeanRow mean;
      mean.dataset = ds;
      mean.algorithm = alg;
      for (const ScoreRow& row : report.per_fold) {
        if (row.dataset != ds || row.algorithm != alg || !row.ok) continue;
        ++mean.folds;
        pred.push_back(row.predictivity);
        if (row.stability) stab.push_back(*row.stability);
        if (row.simplicity) simp.push_back(*row.simplicity);
        if (row.interpretability) interp.push_back(*row.interpretability);
      }
      mean.predictivity = mean_of(pred);
      mean.stability = mean_of(stab);
      mean.simplicity = mean_of(simp);
      mean.interpretability = mean_of(interp);
      report.means.push_back(std::move(mean));
    }
  }

  std::vector<std::array<double, 3>> complete;
  for (const ScoreRow& row : report.per_fold) {
    if (row.ok && row.stability && row.simplicity) {
      complete.push_back({row.predictivity, *row.stability, *row.simplicity});
    }
  }
  report.correlation_rows = complete.size();
  if (complete.size() >= 2) {
    report.correlations = score_correlations(complete);
  } else {
    report.warnings.push_back("correlations unavailable: fewer than 2 complete score rows");
  }
  return report;
}

}  // namespace rulescore
