#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "rit/candidates.hpp"
#include "rit/dataset.hpp"

namespace rit {

/// Fills exact class prevalences and keeps exactly the patterns with
/// prev1 >= theta1 and prev0 <= theta0.
CandidateSet verify_candidates(const SparseDataset& ds, const CandidateSet& candidates,
                               double theta0, double theta1);

using RankedCandidate = std::pair<Pattern, CandidateStats>;

/// Drops patterns seen in fewer than `min_tree_count` trees, then orders by
/// tree count (descending), pattern length (ascending), indices (lexicographic).
std::vector<RankedCandidate> rank_candidates(const CandidateSet& candidates,
                                             std::size_t min_tree_count);

/// P(Y=1 | S in X) by Bayes' rule from the exact class prevalences and the
/// class-1 prior. Throws DataError when no observation contains the pattern.
double posterior(const SparseDataset& ds, const Pattern& pattern);

/// Average-log-odds classifier over a fixed list of patterns.
struct PatternModel {
  std::vector<Pattern> patterns;
  std::vector<double> logodds_present;  ///< log-odds of class 1 given pattern in X
  std::vector<double> logodds_absent;   ///< log-odds of class 1 given pattern not in X
  double decision_offset = 0.0;

  double score(IndexSpan x) const;
};

struct Prediction {
  int label = 0;
  double score = 0.0;
};

/// Conditionals use add-one smoothing, so every log-odds is finite. The
/// offset is chosen among midpoints of sorted training scores so the two
/// class-wise training error rates are as close as possible (ties: lower
/// total error, then the widest score gap).
PatternModel fit_classifier(const SparseDataset& train, std::span<const Pattern> patterns);

/// Class 1 iff score > decision_offset; an exact tie goes to class 0.
Prediction predict(const PatternModel& model, IndexSpan x);

struct Evaluation {
  double error = 0.0;
  double error_class0 = 0.0;
  double error_class1 = 0.0;
  std::size_t n = 0;
};

Evaluation evaluate(const PatternModel& model, const SparseDataset& ds);

/// One JSON object per line with keys in fixed order:
/// {"pattern":[...],"tree_count":N,"prev1":x,"prev0":x,"posterior":x}
void write_jsonl(std::ostream& out, const SparseDataset& ds, std::span<const RankedCandidate> ranked);

/// Reads the "pattern" arrays back from JSON-lines.
std::vector<Pattern> read_patterns_jsonl(std::istream& in);

}  // namespace rit
