#include "rit/mining.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <tuple>

#include "json.hpp"
#include "rit/error.hpp"
#include "rit/minhash.hpp"

namespace rit {

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace

CandidateSet verify_candidates(const SparseDataset& ds, const CandidateSet& candidates,
                               double theta0, double theta1) {
  if (!(theta0 >= 0.0 && theta0 < theta1 && theta1 <= 1.0))
    throw ConfigError("thresholds must satisfy 0 <= theta0 < theta1 <= 1");
  ds.require_both_classes();
  const auto class1 = ds.class_rows(1);
  const auto class0 = ds.class_rows(0);

  CandidateSet kept;
  for (const auto& [pattern, stats] : candidates) {
    const double prev1 = exact_prevalence(class1, pattern.indices());
    if (prev1 < theta1) continue;
    const double prev0 = exact_prevalence(class0, pattern.indices());
    if (prev0 > theta0) continue;
    auto& entry = kept[pattern];
    entry = stats;
    entry.prev1 = prev1;
    entry.prev0 = prev0;
  }
  return kept;
}

std::vector<RankedCandidate> rank_candidates(const CandidateSet& candidates,
                                             std::size_t min_tree_count) {
  std::vector<RankedCandidate> ranked;
  for (const auto& entry : candidates)
    if (entry.second.tree_count >= min_tree_count) ranked.push_back(entry);
  std::sort(ranked.begin(), ranked.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    if (a.second.tree_count != b.second.tree_count) return a.second.tree_count > b.second.tree_count;
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  return ranked;
}

double posterior(const SparseDataset& ds, const Pattern& pattern) {
  ds.require_both_classes();
  const auto class1 = ds.class_rows(1);
  const auto class0 = ds.class_rows(0);
  const double prior1 = static_cast<double>(class1.size()) / static_cast<double>(ds.size());
  const double a = exact_prevalence(class1, pattern.indices()) * prior1;
  const double b = exact_prevalence(class0, pattern.indices()) * (1.0 - prior1);
  if (a + b == 0.0) throw DataError("pattern has no support");
  return a / (a + b);
}

double PatternModel::score(IndexSpan x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < patterns.size(); ++j)
    total += patterns[j].is_subset_of(x) ? logodds_present[j] : logodds_absent[j];
  return total / static_cast<double>(patterns.size());
}

PatternModel fit_classifier(const SparseDataset& train, std::span<const Pattern> patterns) {
  if (patterns.empty()) throw ConfigError("classifier needs at least one pattern");
  train.require_both_classes();

  PatternModel model;
  model.patterns.assign(patterns.begin(), patterns.end());
  for (const auto& pattern : model.patterns) {
    double present = 0, present1 = 0, absent = 0, absent1 = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const bool hit = pattern.is_subset_of(train.row(i));
      (hit ? present : absent) += 1;
      if (train.label(i) == 1) (hit ? present1 : absent1) += 1;
    }
    model.logodds_present.push_back(logit((present1 + 1.0) / (present + 2.0)));
    model.logodds_absent.push_back(logit((absent1 + 1.0) / (absent + 2.0)));
  }

  std::vector<std::pair<double, int>> scored;
  scored.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) scored.emplace_back(model.score(train.row(i)), train.label(i));
  std::sort(scored.begin(), scored.end());
  const double n1 = static_cast<double>(train.class_count(1));
  const double n0 = static_cast<double>(train.class_count(0));

  // Sweep thresholds between consecutive distinct scores; class-1 errors are
  // scores <= t, class-0 errors are scores > t.
  double below1 = 0, below0 = 0;
  auto best = std::tuple(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity());
  double best_threshold = scored.front().first - 1.0;
  auto consider = [&](double threshold, double gap) {
    const double err1 = below1 / n1;
    const double err0 = (n0 - below0) / n0;
    const auto key = std::tuple(std::abs(err1 - err0), err1 + err0, -gap);
    if (key < best) {
      best = key;
      best_threshold = threshold;
    }
  };
  consider(scored.front().first - 1.0, 0.0);
  for (std::size_t i = 0; i < scored.size();) {
    const double value = scored[i].first;
    for (; i < scored.size() && scored[i].first == value; ++i) (scored[i].second == 1 ? below1 : below0) += 1;
    if (i < scored.size()) {
      consider(0.5 * (value + scored[i].first), scored[i].first - value);
    } else {
      consider(value + 1.0, 0.0);
    }
  }
  model.decision_offset = best_threshold;
  return model;
}

Prediction predict(const PatternModel& model, IndexSpan x) {
  if (model.patterns.empty()) throw ConfigError("model has no patterns");
  const double s = model.score(x);
  return {s > model.decision_offset ? 1 : 0, s};
}

Evaluation evaluate(const PatternModel& model, const SparseDataset& ds) {
  Evaluation ev;
  ev.n = ds.size();
  double wrong1 = 0, wrong0 = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int y = predict(model, ds.row(i)).label;
    if (y != ds.label(i)) (ds.label(i) == 1 ? wrong1 : wrong0) += 1;
  }
  const auto n1 = static_cast<double>(ds.class_count(1));
  const auto n0 = static_cast<double>(ds.class_count(0));
  ev.error = ds.empty() ? 0.0 : (wrong0 + wrong1) / static_cast<double>(ds.size());
  ev.error_class1 = n1 > 0 ? wrong1 / n1 : 0.0;
  ev.error_class0 = n0 > 0 ? wrong0 / n0 : 0.0;
  return ev;
}

void write_jsonl(std::ostream& out, const SparseDataset& ds, std::span<const RankedCandidate> ranked) {
  for (const auto& [pattern, stats] : ranked) {
    nlohmann::ordered_json line;
    line["pattern"] = IndexSet(pattern.begin(), pattern.end());
    line["tree_count"] = stats.tree_count;
    line["prev1"] = stats.prev1 ? *stats.prev1 : exact_prevalence(ds, pattern, ClassSelector::kClass1);
    line["prev0"] = stats.prev0 ? *stats.prev0 : exact_prevalence(ds, pattern, ClassSelector::kClass0);
    line["posterior"] = posterior(ds, pattern);
    out << line.dump() << '\n';
  }
}

std::vector<Pattern> read_patterns_jsonl(std::istream& in) {
  std::vector<Pattern> patterns;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      auto pattern = Pattern(obj.at("pattern").get<IndexSet>());
      if (pattern.empty()) throw DataError("empty pattern");
      patterns.push_back(std::move(pattern));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("bad pattern record at line " + std::to_string(lineno) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " at line " + std::to_string(lineno));
    }
  }
  return patterns;
}

}  // namespace rit
