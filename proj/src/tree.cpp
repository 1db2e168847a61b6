#include "rit/tree.hpp"

#include <algorithm>
#include <atomic>
#include <string>
#include <thread>

#include "rit/error.hpp"

namespace rit {

void RitConfig::validate() const {
  if (!(theta0 >= 0.0 && theta0 < theta1 && theta1 <= 1.0))
    throw ConfigError("thresholds must satisfy 0 <= theta0 < theta1 <= 1");
  if (branch < 1) throw ConfigError("branch count must be at least 1");
  if (!(branch_alpha >= 0.0 && branch_alpha < 1.0)) throw ConfigError("branch alpha must lie in [0, 1)");
  if (trees < 1) throw ConfigError("need at least one tree");
  if (early_stopping && hash_permutations < 1) throw ConfigError("need at least one hash permutation");
  if (const auto* fixed = std::get_if<FixedDepth>(&depth); fixed && fixed->depth < 1)
    throw ConfigError("fixed depth must be at least 1");
  if (const auto* rec = std::get_if<Recursive>(&depth); rec && (rec->max_depth < 1 || rec->node_budget < 1))
    throw ConfigError("max depth and node budget must be at least 1");
}

void TreeStats::record_node(std::size_t depth, std::size_t size) {
  if (nodes_at_depth.size() <= depth) {
    nodes_at_depth.resize(depth + 1, 0);
    size_at_depth.resize(depth + 1, 0);
  }
  ++nodes_at_depth[depth];
  size_at_depth[depth] += size;
}

TreeStats& TreeStats::operator+=(const TreeStats& other) {
  nodes_visited += other.nodes_visited;
  intersections_done += other.intersections_done;
  element_comparisons += other.element_comparisons;
  pruned_nodes += other.pruned_nodes;
  leaves_emitted += other.leaves_emitted;
  estimates_computed += other.estimates_computed;
  depth_cap_hits += other.depth_cap_hits;
  const auto depth = std::max(nodes_at_depth.size(), other.nodes_at_depth.size());
  nodes_at_depth.resize(depth, 0);
  size_at_depth.resize(depth, 0);
  for (std::size_t d = 0; d < other.nodes_at_depth.size(); ++d) {
    nodes_at_depth[d] += other.nodes_at_depth[d];
    size_at_depth[d] += other.size_at_depth[d];
  }
  return *this;
}

IndexSet intersect(IndexSpan a, IndexSpan b, std::uint64_t* comparisons) {
  if (a.size() > b.size()) std::swap(a, b);
  IndexSet out;
  out.reserve(a.size());
  std::uint64_t probes = 0;
  auto lo = b.begin();
  for (Index v : a) {
    // Narrowing the search window to [lo, end) is valid because a is sorted.
    auto first = lo;
    auto count = std::distance(first, b.end());
    while (count > 0) {
      ++probes;
      const auto step = count / 2;
      const auto mid = first + step;
      if (*mid < v) {
        first = mid + 1;
        count -= step + 1;
      } else {
        count = step;
      }
    }
    lo = first;
    if (lo == b.end()) break;
    if (*lo == v) out.push_back(v);
  }
  if (comparisons) *comparisons += probes;
  return out;
}

std::size_t sample_branch_count(std::size_t b, double alpha, Stream& rng) {
  if (alpha <= 0.0) return b;
  return bernoulli(rng, alpha) ? b + 1 : b;
}

namespace {

struct Node {
  IndexSet set;
  std::size_t depth;
  Stream rng;
};

class TreeGrower {
 public:
  TreeGrower(std::span<const IndexSpan> class1, const RitConfig& cfg, const MinHashMatrix* hash,
             std::uint64_t tree_index)
      : class1_(class1), cfg_(cfg), hash_(hash), tree_(tree_index) {}

  TreeResult grow() {
    Node root = make_root();
    if (const auto* fixed = std::get_if<FixedDepth>(&cfg_.depth)) {
      grow_fixed(std::move(root), fixed->depth);
    } else {
      const auto& rec = std::get<Recursive>(cfg_.depth);
      grow_recursive(std::move(root), rec.max_depth, rec.node_budget);
    }
    auto& leaves = result_.leaves;
    std::sort(leaves.begin(), leaves.end());
    leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
    return std::move(result_);
  }

 private:
  Node make_root() {
    Stream rng(cfg_.seed, tree_, next_index_++);
    const auto pick = uniform_below(rng, class1_.size());
    const auto row = class1_[pick];
    auto& st = result_.stats;
    ++st.nodes_visited;
    st.record_node(0, row.size());
    return Node{IndexSet(row.begin(), row.end()), 0, rng};
  }

  Node make_child(const Node& parent) {
    Stream rng(cfg_.seed, tree_, next_index_++);
    const auto pick = uniform_below(rng, class1_.size());
    auto& st = result_.stats;
    auto set = intersect(class1_[pick], parent.set, &st.element_comparisons);
    ++st.nodes_visited;
    ++st.intersections_done;
    st.record_node(parent.depth + 1, set.size());
    return Node{std::move(set), parent.depth + 1, rng};
  }

  std::size_t branching(Node& node) {
    if (node.depth == 0 && cfg_.single_child_root) return 1;
    return sample_branch_count(cfg_.branch, cfg_.branch_alpha, node.rng);
  }

  // Early-stopping test. Called at most once per node.
  bool too_common(const Node& node) {
    if (!hash_) return false;
    ++result_.stats.estimates_computed;
    return estimate_prevalence(*hash_, node.set) > cfg_.theta0;
  }

  void prune_children(Node& node) {
    const auto skipped = branching(node);
    result_.stats.nodes_visited += skipped;
    result_.stats.pruned_nodes += skipped;
  }

  void emit(IndexSet set) {
    ++result_.stats.leaves_emitted;
    result_.leaves.emplace_back(std::move(set));
  }

  void grow_fixed(Node root, std::size_t depth) {
    std::vector<Node> stack;
    stack.push_back(std::move(root));
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (node.set.empty()) continue;  // every descendant would be empty
      if (node.depth == depth) {
        emit(std::move(node.set));
        continue;
      }
      if (too_common(node)) {
        prune_children(node);
        continue;
      }
      const auto count = branching(node);
      const auto base = stack.size();
      for (std::size_t c = 0; c < count; ++c) stack.push_back(make_child(node));
      std::reverse(stack.begin() + static_cast<std::ptrdiff_t>(base), stack.end());
    }
  }

  // A node survives when it is nonempty and passes the early-stopping test.
  // Leaves are survivors none of whose children survive.
  void grow_recursive(Node root, std::size_t max_depth, std::uint64_t node_budget) {
    if (root.set.empty()) return;
    if (too_common(root)) {
      prune_children(root);
      return;
    }
    std::vector<Node> stack;
    stack.push_back(std::move(root));
    std::vector<Node> survivors;
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (result_.stats.nodes_visited > node_budget)
        throw ConfigError("tree " + std::to_string(tree_) + " exceeded the node budget; lower the branch count or use a fixed depth");
      if (node.depth == max_depth) {
        ++result_.stats.depth_cap_hits;
        emit(std::move(node.set));
        continue;
      }
      const auto count = branching(node);
      survivors.clear();
      for (std::size_t c = 0; c < count; ++c) {
        Node child = make_child(node);
        if (child.set.empty()) continue;
        if (too_common(child)) {
          prune_children(child);
          continue;
        }
        survivors.push_back(std::move(child));
      }
      if (survivors.empty()) {
        emit(std::move(node.set));
        continue;
      }
      for (auto it = survivors.rbegin(); it != survivors.rend(); ++it) stack.push_back(std::move(*it));
    }
  }

  std::span<const IndexSpan> class1_;
  const RitConfig& cfg_;
  const MinHashMatrix* hash_;
  std::uint64_t tree_;
  std::uint64_t next_index_ = 1;
  TreeResult result_;
};

}  // namespace

TreeResult grow_tree(std::span<const IndexSpan> class1, const RitConfig& cfg,
                     const MinHashMatrix* hash, std::uint64_t tree_index) {
  if (class1.empty()) throw DataError("class 1 has no observations");
  return TreeGrower(class1, cfg, hash, tree_index).grow();
}

RunResult run(const SparseDataset& ds, const RitConfig& cfg, unsigned threads) {
  cfg.validate();
  ds.require_both_classes();
  if (!cfg.early_stopping) return run(ds, cfg, nullptr, threads);
  const auto hash = build_hash_matrix(ds, 0, cfg.hash_permutations, cfg.seed, threads);
  return run(ds, cfg, &hash, threads);
}

RunResult run(const SparseDataset& ds, const RitConfig& cfg, const MinHashMatrix* hash,
              unsigned threads) {
  cfg.validate();
  ds.require_both_classes();
  if (hash && hash->p() != ds.p()) throw ConfigError("hash matrix width does not match the dataset");

  const auto class1 = ds.class_rows(1);
  std::vector<TreeResult> trees(cfg.trees);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto m = next++; m < cfg.trees; m = next++) trees[m] = grow_tree(class1, cfg, hash, m);
  };
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(cfg.trees));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  RunResult out;
  for (auto& tree : trees) {
    for (auto& leaf : tree.leaves) ++out.candidates[std::move(leaf)].tree_count;
    out.stats += tree.stats;
  }
  return out;
}

}  // namespace rit
