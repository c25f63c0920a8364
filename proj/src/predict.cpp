#include "rulescore/predict.hpp"

#include <map>

namespace rulescore {

double predict_ruleset(const RuleSet& rs, Observation x) {
  double sum = 0.0;
  std::size_t active = 0;
  std::map<double, std::size_t> votes;
  for (const Rule& r : rs.rules) {
    if (!rule_activated(r, x)) continue;
    ++active;
    if (rs.task == TaskKind::Regression) {
      sum += r.prediction;
    } else {
      ++votes[r.prediction];
    }
  }
  if (active == 0) return rs.default_prediction;
  if (rs.task == TaskKind::Regression) return sum / static_cast<double>(active);

  double best = votes.begin()->first;
  std::size_t best_count = 0;
  for (const auto& [code, count] : votes) {
    if (count > best_count) {
      best = code;
      best_count = count;
    }
  }
  return best;
}

std::vector<double> predict_ruleset(const RuleSet& rs, const Dataset& data) {
  std::vector<double> out;
  out.reserve(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto x = data.observation(i);
    out.push_back(predict_ruleset(rs, x));
  }
  return out;
}

}  // namespace rulescore
