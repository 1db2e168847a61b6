#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "rit/candidates.hpp"
#include "rit/dataset.hpp"
#include "rit/minhash.hpp"
#include "rit/random.hpp"

namespace rit {

/// Grow every tree to exactly `depth` levels below the root.
struct FixedDepth {
  std::size_t depth = 5;
};

/// Keep adding children to surviving nodes until every branch is pruned or
/// empty; `max_depth` bounds runaway growth. A pattern that is never pruned
/// and kept by more than 1/branch of class-1 rows makes growth supercritical;
/// a tree visiting more than `node_budget` nodes raises ConfigError.
struct Recursive {
  std::size_t max_depth = 64;
  std::uint64_t node_budget = 10'000'000;
};

using DepthMode = std::variant<FixedDepth, Recursive>;

struct RitConfig {
  double theta0 = 0.1;         ///< class-0 prevalence ceiling
  double theta1 = 0.5;         ///< class-1 prevalence floor
  std::size_t branch = 5;      ///< base child count b
  double branch_alpha = 0.0;   ///< probability of one extra child
  DepthMode depth = Recursive{};
  std::size_t trees = 100;
  bool single_child_root = true;
  bool early_stopping = true;
  std::uint64_t seed = 1;
  std::size_t hash_permutations = 200;
  std::size_t min_tree_count = 2;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// Operation counters. Sums are order-insensitive, so per-tree stats can be
/// merged in any order.
struct TreeStats {
  std::uint64_t nodes_visited = 0;        ///< root plus every child slot considered
  std::uint64_t intersections_done = 0;
  std::uint64_t element_comparisons = 0;  ///< binary-search probes inside intersect()
  std::uint64_t pruned_nodes = 0;         ///< child slots skipped by early stopping
  std::uint64_t leaves_emitted = 0;
  std::uint64_t estimates_computed = 0;
  std::uint64_t depth_cap_hits = 0;
  /// Per depth: number of nodes whose set was computed, and the sum of their sizes.
  std::vector<std::uint64_t> nodes_at_depth;
  std::vector<std::uint64_t> size_at_depth;

  void record_node(std::size_t depth, std::size_t size);
  TreeStats& operator+=(const TreeStats& other);
};

/// Sorted intersection. Probes each element of the smaller set into the larger
/// by binary search; each probe step is added to `comparisons`.
IndexSet intersect(IndexSpan a, IndexSpan b, std::uint64_t* comparisons = nullptr);

/// b with probability 1 - alpha, b + 1 with probability alpha.
std::size_t sample_branch_count(std::size_t b, double alpha, Stream& rng);

struct TreeResult {
  std::vector<Pattern> leaves;  ///< deduplicated, nonempty
  TreeStats stats;
};

/// Grows one intersection tree over class-1 rows.
///
/// Nodes are numbered breadth-first (parents before children); node j draws
/// its randomness from Stream(seed, tree_index, j). With `hash` present, a
/// node whose estimated class-0 prevalence exceeds theta0 gets no children.
TreeResult grow_tree(std::span<const IndexSpan> class1, const RitConfig& cfg,
                     const MinHashMatrix* hash, std::uint64_t tree_index);

struct RunResult {
  CandidateSet candidates;
  TreeStats stats;
};

/// Grows cfg.trees trees and aggregates their leaves, counting for each
/// pattern how many distinct trees produced it. Output does not depend on
/// `threads`.
RunResult run(const SparseDataset& ds, const RitConfig& cfg, unsigned threads = 1);

/// Same, with a caller-supplied class-0 hash matrix (or none).
RunResult run(const SparseDataset& ds, const RitConfig& cfg, const MinHashMatrix* hash,
              unsigned threads = 1);

}  // namespace rit
