#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "rulescore/protocol.hpp"

namespace rulescore {

inline constexpr const char* kReportJson = "report.json";
inline constexpr const char* kScoresCsv = "scores.csv";
inline constexpr const char* kSummaryMd = "summary.md";
inline constexpr const char* kBoxplotCsv = "boxplot_data.csv";

/// Full report with a fixed key order. Unavailable values are null.
nlohmann::ordered_json report_to_json(const ScoreReport& report, const EvaluationConfig& cfg);

/// One row per dataset x algorithm x fold.
std::string scores_csv(const ScoreReport& report);

/// Long format: dataset, algorithm, fold, score, value.
std::string boxplot_csv(const ScoreReport& report);

/// Per-dataset mean tables (one per score) and the correlation matrix.
std::string summary_markdown(const ScoreReport& report, const EvaluationConfig& cfg);

/// Writes the four artifacts into `dir`, creating it if needed. Returns
/// the written paths.
std::vector<std::string> write_report(const ScoreReport& report, const EvaluationConfig& cfg,
                                      const std::string& dir);

}  // namespace rulescore
