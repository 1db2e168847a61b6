#include "rit/pipeline.hpp"

#include <Eigen/Core>
#include <chrono>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "rit/error.hpp"
#include "rit/minhash.hpp"

namespace rit {

namespace {

MineReport grow(const SparseDataset& ds, int target_class, const RitConfig& cfg, unsigned threads) {
  if (target_class != 0 && target_class != 1) throw ConfigError("class must be 0 or 1");
  cfg.validate();
  MineReport report;
  report.data = ds.with_target(target_class);
  report.data.require_both_classes();
  const auto start = std::chrono::steady_clock::now();
  auto result = run(report.data, cfg, threads);
  report.stats = std::move(result.stats);
  report.raw_candidates = result.candidates.size();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.ranked.assign(result.candidates.begin(), result.candidates.end());
  return report;
}

}  // namespace

MineReport mine(const SparseDataset& ds, int target_class, const RitConfig& cfg, unsigned threads) {
  auto report = grow(ds, target_class, cfg, threads);
  CandidateSet raw(report.ranked.begin(), report.ranked.end());
  const auto verified = verify_candidates(report.data, raw, cfg.theta0, cfg.theta1);
  report.verified_candidates = verified.size();
  report.ranked = rank_candidates(verified, cfg.min_tree_count);
  return report;
}

MineReport mine_unverified(const SparseDataset& ds, int target_class, const RitConfig& cfg,
                           unsigned threads) {
  auto report = grow(ds, target_class, cfg, threads);
  CandidateSet raw(report.ranked.begin(), report.ranked.end());
  report.ranked = rank_candidates(raw, cfg.min_tree_count);
  return report;
}

void write_stats(std::ostream& out, const MineReport& report) {
  const auto& s = report.stats;
  out << "nodes_visited        " << s.nodes_visited << '\n'
      << "intersections_done   " << s.intersections_done << '\n'
      << "element_comparisons  " << s.element_comparisons << '\n'
      << "pruned_nodes         " << s.pruned_nodes << '\n'
      << "leaves_emitted       " << s.leaves_emitted << '\n'
      << "estimates_computed   " << s.estimates_computed << '\n'
      << "depth_cap_hits       " << s.depth_cap_hits << '\n'
      << "distinct_candidates  " << report.raw_candidates << '\n'
      << "verified_candidates  " << report.verified_candidates << '\n'
      << "reported_patterns    " << report.ranked.size() << '\n'
      << "wall_seconds         " << report.seconds << '\n';
}

HashCheck hash_check(const SparseDataset& ds, int class_label, const Pattern& pattern,
                     std::size_t permutations, std::size_t redraws, std::uint64_t seed,
                     unsigned threads) {
  if (pattern.empty()) throw ConfigError("pattern must be nonempty");
  if (pattern.indices().back() >= ds.p()) throw ConfigError("pattern index out of range");
  if (redraws < 1) throw ConfigError("need at least one redraw");
  const auto rows = ds.class_rows(class_label);
  if (rows.empty()) throw DataError("selected class is empty");

  HashCheck out;
  out.redraws = redraws;
  out.exact = exact_prevalence(rows, pattern.indices());
  std::size_t any = 0;
  for (auto row : rows) {
    for (Index k : pattern) {
      if (std::binary_search(row.begin(), row.end(), k)) {
        ++any;
        break;
      }
    }
  }
  out.pi2 = static_cast<double>(any) / static_cast<double>(rows.size());
  out.pi1 = any ? out.exact / out.pi2 : 0.0;

  Eigen::ArrayXd draws(static_cast<Eigen::Index>(redraws));
  for (std::size_t r = 0; r < redraws; ++r) {
    const auto h = build_hash_matrix(rows, ds.p(), permutations, seed + r, threads);
    draws(static_cast<Eigen::Index>(r)) = estimate_prevalence(h, pattern);
    if (r == 0) {
      out.estimate = draws(0);
      out.estimate_pi1 = estimate_pi1(h, pattern);
      out.estimate_pi2 = estimate_pi2(h, pattern);
    }
  }
  out.mc_mean = draws.mean();
  out.mc_sd = redraws > 1 ? std::sqrt((draws - out.mc_mean).square().sum() / static_cast<double>(redraws - 1)) : 0.0;
  const double L = static_cast<double>(permutations);
  const double spread = out.pi1 * (1.0 - out.pi1 * out.pi2);
  out.theory_sd = std::sqrt(out.pi2 * out.pi2 * spread / L);
  out.subsample_sd = std::sqrt(out.pi2 * spread / L);
  return out;
}

}  // namespace rit
