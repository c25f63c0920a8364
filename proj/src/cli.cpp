#include "rulescore/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rulescore/dataset.hpp"
#include "rulescore/discretize.hpp"
#include "rulescore/error.hpp"
#include "rulescore/interchange.hpp"
#include "rulescore/protocol.hpp"
#include "rulescore/report.hpp"
#include "rulescore/scores.hpp"

namespace rulescore::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::size_t q = kDefaultBins;
  std::size_t folds = 10;
  std::string weights = "1,1,1";
  std::string out;
  std::size_t jobs = 1;
};

struct DataOptions {
  std::vector<std::string> paths;
  std::string target;
  std::string task;
  std::vector<std::string> categorical;
};

// Shortest round-trip form, always with a decimal point.
std::string format_number(double v) {
  std::string s = fmt::format("{}", v);
  if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

Weights parse_weights(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("--weights: '{}' is not a number", item));
    }
  }
  if (parts.size() != 3) throw UsageError(fmt::format("--weights: expected 3 values, got '{}'", text));
  try {
    return Weights::normalized(parts[0], parts[1], parts[2]);
  } catch (const Error& e) {
    throw UsageError(fmt::format("--weights: {}", e.what()));
  }
}

CsvOptions csv_options(const DataOptions& d) {
  CsvOptions o;
  o.target = d.target;
  o.categorical = d.categorical;
  if (!d.task.empty()) {
    o.task = parse_task(d.task);
    if (!o.task) throw UsageError(fmt::format("--task: unknown task '{}'", d.task));
  }
  return o;
}

void check_globals(const GlobalOptions& g) {
  if (g.q < 2) throw UsageError(fmt::format("--q: must be >= 2, got {}", g.q));
  if (g.folds < 2) throw UsageError(fmt::format("--folds: must be >= 2, got {}", g.folds));
}

void add_data_options(CLI::App* cmd, DataOptions& d, bool required) {
  auto* data = cmd->add_option("--data", d.paths, "CSV dataset(s), comma-separated")->delimiter(',');
  if (required) data->required();
  cmd->add_option("--target", d.target, "Target column (default: last column)");
  cmd->add_option("--task", d.task, "regression or classification (default: inferred)");
  cmd->add_option("--categorical", d.categorical, "Columns to treat as categorical")->delimiter(',');
}

int cmd_evaluate(const GlobalOptions& g, const DataOptions& d, const std::vector<std::string>& algos,
                 const CartParams& cart, const SirusLiteParams& sirus, std::ostream& out) {
  check_globals(g);
  EvaluationConfig cfg;
  cfg.k = g.folds;
  cfg.q = g.q;
  cfg.seed = g.seed;
  cfg.jobs = g.jobs;
  cfg.weights = parse_weights(g.weights);
  for (const auto& token : algos) {
    AlgorithmSpec spec;
    try {
      spec = parse_algorithm(token);
    } catch (const Error& e) {
      throw UsageError(fmt::format("--algos: {}", e.what()));
    }
    spec.cart = cart;
    spec.sirus = sirus;
    cfg.algorithms.push_back(std::move(spec));
  }
  try {
    validate(cfg);
  } catch (const Error& e) {
    throw UsageError(fmt::format("--algos: {}", e.what()));
  }

  std::vector<Dataset> datasets;
  for (const auto& path : d.paths) datasets.push_back(load_csv(path, csv_options(d)));
  ScoreReport report = evaluate(datasets, cfg);
  const std::string dir = g.out.empty() ? "rulescore-report" : g.out;
  for (const auto& path : write_report(report, cfg, dir)) out << path << '\n';
  return kExitOk;
}

int cmd_score_rules(const GlobalOptions& g, const DataOptions& d, const std::string& rules1,
                    const std::string& rules2, std::ostream& out) {
  check_globals(g);
  if (d.paths.size() != 1) throw UsageError("--data: score-rules takes exactly one dataset");
  Dataset data = load_csv(d.paths.front(), csv_options(d));
  ImportOptions opts;
  opts.schema = &data.schema();
  opts.classes = data.classes();
  RuleSet a = import_rules(rules1, opts);
  RuleSet b = import_rules(rules2, opts);
  QuantileGrid grid = fit_quantile_grid(data, g.q);
  out << format_number(dice_sorensen(discretize_ruleset(grid, a), discretize_ruleset(grid, b))) << '\n';
  return kExitOk;
}

int cmd_validate_rules(const DataOptions& d, const std::string& path, std::ostream& out) {
  ImportOptions opts;
  std::optional<Dataset> data;
  if (!d.paths.empty()) {
    data = load_csv(d.paths.front(), csv_options(d));
    opts.schema = &data->schema();
    opts.classes = data->classes();
  }
  RuleSet rs = import_rules(path, opts);
  out << fmt::format("{}: ok, task {}, {} rules, interpretability index {}\n", path, to_string(rs.task), rs.size(),
                     interpretability_index(rs));
  return kExitOk;
}

int cmd_make_folds(const GlobalOptions& g, const DataOptions& d, std::optional<std::size_t> rows,
                   const std::string& name, std::ostream& out) {
  if (g.folds < 2) throw UsageError(fmt::format("--folds: must be >= 2, got {}", g.folds));
  std::size_t n = 0;
  std::string dataset = name;
  if (!d.paths.empty()) {
    Dataset data = load_csv(d.paths.front(), csv_options(d));
    n = data.rows();
    dataset = data.name();
  } else if (rows) {
    n = *rows;
    if (dataset.empty()) throw UsageError("--name: required with --n (the dataset name seeds the plan)");
  } else {
    throw UsageError("make-folds: one of --data or --n is required");
  }

  FoldPlan plan = kfold_split(n, g.folds, fold_plan_seed(g.seed, dataset));
  std::string csv = "fold,row,role\n";
  for (std::size_t f = 0; f < plan.k; ++f) {
    for (std::size_t r : plan.test_rows(f)) csv += fmt::format("{},{},test\n", f, r);
    auto train = plan.train_rows(f);
    auto [h1, h2] = stability_halves(train.size(), stability_seed(g.seed, dataset, f));
    for (std::size_t i : h1) csv += fmt::format("{},{},half1\n", f, train[i]);
    for (std::size_t i : h2) csv += fmt::format("{},{},half2\n", f, train[i]);
  }
  if (g.out.empty()) {
    out << csv;
  } else {
    std::filesystem::create_directories(g.out);
    auto path = std::filesystem::path(g.out) / "folds.csv";
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::IoError, fmt::format("{}: cannot write file", path.string()));
    file << csv;
    out << path.string() << '\n';
  }
  return kExitOk;
}

bool is_usage_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::FewerThanTwoAlgorithms:
    case ErrorCode::InvalidWeights:
    case ErrorCode::BadK:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpretability scoring of rule-based and tree-based models", "rulescore"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed")->envname("RULESCORE_SEED");
  app.add_option("--q", g.q, "Quantile bins used by the q-stability score");
  app.add_option("--folds", g.folds, "Cross-validation folds");
  app.add_option("--weights", g.weights, "Predictivity,stability,simplicity weights (normalized to sum 1)");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all cores)");

  DataOptions eval_data;
  std::vector<std::string> algos;
  CartParams cart;
  SirusLiteParams sirus;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Run the cross-validation protocol and write reports");
  add_data_options(evaluate_cmd, eval_data, true);
  evaluate_cmd->add_option("--algos", algos, "cart, sirus-lite, rules:FILE[@halves:PATTERN]")
      ->delimiter(',')
      ->required();
  evaluate_cmd->add_option("--cart-max-leaves", cart.max_leaf_nodes, "CART max_leaf_nodes")->capture_default_str();
  evaluate_cmd->add_option("--cart-min-leaf", cart.min_samples_leaf, "CART min_samples_leaf")->capture_default_str();
  evaluate_cmd->add_option("--sirus-trees", sirus.n_trees, "SIRUS-lite tree count")->capture_default_str();
  evaluate_cmd->add_option("--sirus-depth", sirus.max_depth, "SIRUS-lite tree depth")->capture_default_str();
  evaluate_cmd->add_option("--sirus-p0", sirus.p0, "SIRUS-lite frequency threshold")->capture_default_str();
  evaluate_cmd->add_option("--sirus-max-rules", sirus.max_rules, "SIRUS-lite rule cap")->capture_default_str();

  DataOptions score_data;
  std::string rules1, rules2;
  auto* score_cmd = app.add_subcommand("score-rules", "Dice-Sorensen stability of two rule files on one grid");
  add_data_options(score_cmd, score_data, true);
  score_cmd->add_option("--rules", rules1, "First rule-set JSON")->required();
  score_cmd->add_option("--rules2", rules2, "Second rule-set JSON")->required();

  DataOptions validate_data;
  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate-rules", "Check a rule-set JSON file");
  add_data_options(validate_cmd, validate_data, false);
  validate_cmd->add_option("rules,--rules", validate_path, "Rule-set JSON")->required();

  DataOptions folds_data;
  std::optional<std::size_t> rows;
  std::string dataset_name;
  auto* folds_cmd = app.add_subcommand("make-folds", "Emit the fold plan and stability halves");
  add_data_options(folds_cmd, folds_data, false);
  folds_cmd->add_option("--n", rows, "Row count (instead of --data)");
  folds_cmd->add_option("--name", dataset_name, "Dataset name when using --n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (evaluate_cmd->parsed()) return cmd_evaluate(g, eval_data, algos, cart, sirus, out);
    if (score_cmd->parsed()) return cmd_score_rules(g, score_data, rules1, rules2, out);
    if (validate_cmd->parsed()) return cmd_validate_rules(validate_data, validate_path, out);
    if (folds_cmd->parsed()) return cmd_make_folds(g, folds_data, rows, dataset_name, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << (is_usage_code(e.code()) ? "usage error: " : "error: ") << e.what() << '\n';
    return is_usage_code(e.code()) ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace rulescore::cli
