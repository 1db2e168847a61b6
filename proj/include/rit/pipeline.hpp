#pragma once

// End-to-end runs shared by the command-line tool and the acceptance suite.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rit/dataset.hpp"
#include "rit/mining.hpp"
#include "rit/tree.hpp"

namespace rit {

struct MineReport {
  SparseDataset data;  ///< relabelled so that the target class is 1
  std::size_t raw_candidates = 0;
  std::size_t verified_candidates = 0;
  std::vector<RankedCandidate> ranked;
  TreeStats stats;
  double seconds = 0.0;
};

/// Hash the non-target class (when early stopping is on), grow trees over the
/// target class, aggregate, verify exactly against cfg.theta0/theta1, and rank
/// with cfg.min_tree_count.
MineReport mine(const SparseDataset& ds, int target_class, const RitConfig& cfg, unsigned threads = 1);

/// Grow and aggregate only; no verification. Ranked by tree count.
MineReport mine_unverified(const SparseDataset& ds, int target_class, const RitConfig& cfg,
                           unsigned threads = 1);

void write_stats(std::ostream& out, const MineReport& report);

struct HashCheck {
  double exact = 0.0;       ///< exact prevalence
  double pi1 = 0.0;         ///< exact intersection/union ratio
  double pi2 = 0.0;         ///< exact union fraction
  double estimate = 0.0;    ///< estimate from the first matrix draw
  double estimate_pi1 = 0.0;
  double estimate_pi2 = 0.0;
  double mc_mean = 0.0;     ///< mean estimate over the redraws
  double mc_sd = 0.0;       ///< sd of the estimate over the redraws
  double theory_sd = 0.0;   ///< sqrt(pi2^2 pi1 (1 - pi1 pi2) / L)
  double subsample_sd = 0.0;  ///< sqrt(pi2 pi1 (1 - pi1 pi2) / L)
  std::size_t redraws = 0;
};

/// Compares the min-hash prevalence estimate of `pattern` over one class with
/// its exact value, and over `redraws` independent matrices with the
/// asymptotic standard deviation.
HashCheck hash_check(const SparseDataset& ds, int class_label, const Pattern& pattern,
                     std::size_t permutations, std::size_t redraws, std::uint64_t seed,
                     unsigned threads = 1);

}  // namespace rit
