#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rulescore/cart.hpp"
#include "rulescore/dataset.hpp"
#include "rulescore/discretize.hpp"
#include "rulescore/scores.hpp"
#include "rulescore/sirus_lite.hpp"

namespace rulescore {

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;  // row -> fold

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
};

/// Seeded shuffle dealt round-robin into k folds. Throws BadK unless 2 <= k <= n.
FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

/// Disjoint random halves of sizes floor(n/2) and ceil(n/2). Throws TooSmall when n < 4.
std::pair<Dataset, Dataset> stability_split(const Dataset& train, std::uint64_t seed);

/// Row positions (0..n-1, sorted) of the two halves drawn by stability_split.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stability_halves(std::size_t n, std::uint64_t seed);

enum class AlgorithmSource { BuiltinCart, BuiltinSirusLite, ImportedRules };

struct AlgorithmSpec {
  std::string id;
  AlgorithmSource source = AlgorithmSource::BuiltinCart;
  CartParams cart;
  SirusLiteParams sirus;
  // Imported rules. "{fold}" in a path is replaced by the 0-based fold
  // index; "{half}" in `halves_path` by 1 or 2. Without `halves_path` the
  // stability of an imported algorithm is unavailable.
  std::string rules_path;
  std::string halves_path;
};

/// Parses "cart", "sirus-lite" or "rules:PATH[@halves:PATTERN]".
AlgorithmSpec parse_algorithm(const std::string& token);

struct EvaluationConfig {
  std::size_t k = 10;
  std::size_t q = kDefaultBins;
  Weights weights;
  std::uint64_t seed = 0;
  std::vector<AlgorithmSpec> algorithms;
  // Upper bound on worker threads; 0 picks the hardware concurrency.
  std::size_t jobs = 1;
};

/// Validates the config; throws FewerThanTwoAlgorithms, InvalidArgument.
void validate(const EvaluationConfig& cfg);

/// Scores of one algorithm on one fold of one dataset.
struct ScoreRow {
  std::string dataset;
  std::string algorithm;
  std::size_t fold = 0;
  bool ok = true;
  std::string error;
  std::size_t rules = 0;
  std::size_t interpretability_index = 0;
  double predictivity = 0.0;
  std::optional<double> stability;
  std::optional<double> simplicity;
  std::optional<double> interpretability;
};

struct MeanRow {
  std::string dataset;
  std::string algorithm;
  std::size_t folds = 0;
  std::optional<double> predictivity;
  std::optional<double> stability;
  std::optional<double> simplicity;
  std::optional<double> interpretability;
};

inline constexpr std::array<const char*, 3> kCorrelationLabels{"predictivity", "stability", "simplicity"};

/// Pearson correlations; undefined entries (zero variance) are nullopt.
using CorrelationMatrix = std::array<std::array<std::optional<double>, 3>, 3>;

struct ScoreReport {
  std::vector<std::string> datasets;
  std::vector<std::string> algorithms;
  std::vector<ScoreRow> per_fold;
  std::vector<MeanRow> means;
  std::optional<CorrelationMatrix> correlations;
  std::size_t correlation_rows = 0;
  std::vector<std::string> warnings;
};

/// Pearson correlation of two columns, nullopt when either is constant.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

/// Correlations between (predictivity, stability, simplicity) columns.
/// Throws InsufficientRows when fewer than 2 rows.
CorrelationMatrix score_correlations(const std::vector<std::array<double, 3>>& rows);

/// Seed of a dataset's fold plan under the run seed.
std::uint64_t fold_plan_seed(std::uint64_t seed, const std::string& dataset);

/// Seed of the stability half-split of one fold.
std::uint64_t stability_seed(std::uint64_t seed, const std::string& dataset, std::size_t fold);

/// Runs the cross-validation protocol. Algorithm failures on a fold are
/// recorded in the row and the warnings, and excluded from means.
ScoreReport evaluate(const std::vector<Dataset>& datasets, const EvaluationConfig& cfg);

}  // namespace rulescore
