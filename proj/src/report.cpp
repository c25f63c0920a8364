#include "rulescore/report.hpp"

#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "rulescore/error.hpp"

namespace rulescore {

using nlohmann::ordered_json;

namespace {

ordered_json opt(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::string csv_number(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : "NA"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_number(const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : "-"; }

std::string source_name(AlgorithmSource s) {
  switch (s) {
    case AlgorithmSource::BuiltinCart: return "builtin-cart";
    case AlgorithmSource::BuiltinSirusLite: return "builtin-sirus-lite";
    case AlgorithmSource::ImportedRules: return "imported-rules";
  }
  return "unknown";
}

}  // namespace

ordered_json report_to_json(const ScoreReport& report, const EvaluationConfig& cfg) {
  ordered_json doc;
  ordered_json config;
  config["folds"] = cfg.k;
  config["q"] = cfg.q;
  config["weights"] = {cfg.weights.predictivity(), cfg.weights.stability(), cfg.weights.simplicity()};
  config["seed"] = cfg.seed;
  ordered_json algos = ordered_json::array();
  for (const AlgorithmSpec& a : cfg.algorithms) {
    ordered_json ja;
    ja["id"] = a.id;
    ja["source"] = source_name(a.source);
    if (a.source == AlgorithmSource::BuiltinCart) {
      ja["max_leaf_nodes"] = a.cart.max_leaf_nodes;
      ja["min_samples_leaf"] = a.cart.min_samples_leaf;
    } else if (a.source == AlgorithmSource::BuiltinSirusLite) {
      ja["n_trees"] = a.sirus.n_trees;
      ja["max_depth"] = a.sirus.max_depth;
      ja["p0"] = a.sirus.p0;
      ja["max_rules"] = a.sirus.max_rules;
    } else {
      ja["rules"] = a.rules_path;
      ja["halves"] = a.halves_path.empty() ? ordered_json(nullptr) : ordered_json(a.halves_path);
    }
    algos.push_back(std::move(ja));
  }
  config["algorithms"] = std::move(algos);
  doc["config"] = std::move(config);
  doc["datasets"] = report.datasets;
  doc["algorithms"] = report.algorithms;

  ordered_json per_fold = ordered_json::array();
  for (const ScoreRow& r : report.per_fold) {
    ordered_json jr;
    jr["dataset"] = r.dataset;
    jr["algorithm"] = r.algorithm;
    jr["fold"] = r.fold;
    jr["status"] = r.ok ? "ok" : "failed";
    jr["error"] = r.ok ? ordered_json(nullptr) : ordered_json(r.error);
    jr["rules"] = r.rules;
    jr["interpretability_index"] = r.interpretability_index;
    jr["predictivity"] = r.ok ? ordered_json(r.predictivity) : ordered_json(nullptr);
    jr["stability"] = opt(r.stability);
    jr["simplicity"] = opt(r.simplicity);
    jr["interpretability"] = opt(r.interpretability);
    per_fold.push_back(std::move(jr));
  }
  doc["per_fold"] = std::move(per_fold);

  ordered_json means = ordered_json::array();
  for (const MeanRow& m : report.means) {
    ordered_json jm;
    jm["dataset"] = m.dataset;
    jm["algorithm"] = m.algorithm;
    jm["folds"] = m.folds;
    jm["predictivity"] = opt(m.predictivity);
    jm["stability"] = opt(m.stability);
    jm["simplicity"] = opt(m.simplicity);
    jm["interpretability"] = opt(m.interpretability);
    means.push_back(std::move(jm));
  }
  doc["means"] = std::move(means);

  ordered_json corr;
  corr["labels"] = {kCorrelationLabels[0], kCorrelationLabels[1], kCorrelationLabels[2]};
  corr["rows"] = report.correlation_rows;
  if (report.correlations) {
    ordered_json matrix = ordered_json::array();
    for (const auto& row : *report.correlations) {
      ordered_json jrow = ordered_json::array();
      for (const auto& v : row) jrow.push_back(opt(v));
      matrix.push_back(std::move(jrow));
    }
    corr["matrix"] = std::move(matrix);
  } else {
    corr["matrix"] = nullptr;
  }
  doc["correlations"] = std::move(corr);
  doc["warnings"] = report.warnings;
  return doc;
}

std::string scores_csv(const ScoreReport& report) {
  std::string out =
      "dataset,algorithm,fold,status,rules,interpretability_index,predictivity,stability,simplicity,"
      "interpretability\n";
  for (const ScoreRow& r : report.per_fold) {
    std::optional<double> pred = r.ok ? std::optional<double>(r.predictivity) : std::nullopt;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.dataset), csv_field(r.algorithm), r.fold,
                       r.ok ? "ok" : "failed", r.rules, r.interpretability_index, csv_number(pred),
                       csv_number(r.stability), csv_number(r.simplicity), csv_number(r.interpretability));
  }
  return out;
}

std::string boxplot_csv(const ScoreReport& report) {
  std::string out = "dataset,algorithm,fold,score,value\n";
  for (const ScoreRow& r : report.per_fold) {
    if (!r.ok) continue;
    const std::pair<const char*, std::optional<double>> scores[] = {
        {"predictivity", r.predictivity},
        {"stability", r.stability},
        {"simplicity", r.simplicity},
        {"interpretability", r.interpretability},
    };
    for (const auto& [name, value] : scores) {
      if (!value) continue;
      out += fmt::format("{},{},{},{},{}\n", csv_field(r.dataset), csv_field(r.algorithm), r.fold, name, *value);
    }
  }
  return out;
}

std::string summary_markdown(const ScoreReport& report, const EvaluationConfig& cfg) {
  std::string out = "# Interpretability scores\n\n";
  out += fmt::format(
      "Averages over {}-fold cross-validation. q = {}, weights = ({:.4f}, {:.4f}, {:.4f}), seed = {}.\n",
      cfg.k, cfg.q, cfg.weights.predictivity(), cfg.weights.stability(), cfg.weights.simplicity(), cfg.seed);

  auto find_mean = [&](const std::string& ds, const std::string& alg) -> const MeanRow* {
    for (const MeanRow& m : report.means) {
      if (m.dataset == ds && m.algorithm == alg) return &m;
    }
    return nullptr;
  };
  const std::pair<const char*, std::optional<double> MeanRow::*> tables[] = {
      {"Predictivity", &MeanRow::predictivity},
      {"q-stability", &MeanRow::stability},
      {"Simplicity", &MeanRow::simplicity},
      {"Interpretability", &MeanRow::interpretability},
  };
  for (const auto& [title, member] : tables) {
    out += fmt::format("\n## {}\n\n| Dataset |", title);
    for (const auto& alg : report.algorithms) out += fmt::format(" {} |", alg);
    out += "\n|---|";
    for (std::size_t i = 0; i < report.algorithms.size(); ++i) out += ":---:|";
    out += "\n";
    for (const auto& ds : report.datasets) {
      out += fmt::format("| {} |", ds);
      for (const auto& alg : report.algorithms) {
        const MeanRow* m = find_mean(ds, alg);
        out += fmt::format(" {} |", m ? md_number((*m).*member) : "-");
      }
      out += "\n";
    }
  }

  out += fmt::format("\n## Correlation between scores\n\nComputed over {} per-fold rows.\n\n",
                     report.correlation_rows);
  const char* names[] = {"Predictivity", "q-stability", "Simplicity"};
  out += "| | Predictivity | q-stability | Simplicity |\n|---|:---:|:---:|:---:|\n";
  for (std::size_t i = 0; i < 3; ++i) {
    out += fmt::format("| {} |", names[i]);
    for (std::size_t j = 0; j < 3; ++j) {
      if (j < i) {
        out += " - |";
      } else if (!report.correlations) {
        out += " n/a |";
      } else {
        const auto& v = (*report.correlations)[i][j];
        out += v ? fmt::format(" {:.2f} |", *v) : " undefined |";
      }
    }
    out += "\n";
  }

  if (!report.warnings.empty()) {
    out += "\n## Warnings\n\n";
    for (const auto& w : report.warnings) out += fmt::format("- {}\n", w);
  }
  return out;
}

std::vector<std::string> write_report(const ScoreReport& report, const EvaluationConfig& cfg,
                                      const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, fmt::format("{}: cannot create directory: {}", dir, ec.message()));

  const std::pair<const char*, std::string> files[] = {
      {kReportJson, report_to_json(report, cfg).dump(2) + "\n"},
      {kScoresCsv, scores_csv(report)},
      {kSummaryMd, summary_markdown(report, cfg)},
      {kBoxplotCsv, boxplot_csv(report)},
  };
  std::vector<std::string> written;
  for (const auto& [name, content] : files) {
    fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, fmt::format("{}: cannot write file", path.string()));
    out << content;
    written.push_back(path.string());
  }
  return written;
}

}  // namespace rulescore
