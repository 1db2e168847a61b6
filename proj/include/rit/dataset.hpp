#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rit {

using Index = std::uint32_t;
using IndexSet = std::vector<Index>;
using IndexSpan = std::span<const Index>;

/// True when `values` is strictly increasing.
bool is_canonical(IndexSpan values);

/// True when every element of `pattern` occurs in `row`. Both sorted.
bool contains_all(IndexSpan row, IndexSpan pattern);

/// A candidate interaction: a sorted, duplicate-free set of variable indices.
class Pattern {
 public:
  Pattern() = default;
  /// Throws DataError unless `indices` is strictly increasing.
  explicit Pattern(IndexSet indices);
  Pattern(std::initializer_list<Index> indices);

  /// Sorts and deduplicates arbitrary input.
  static Pattern from_unsorted(IndexSet indices);

  IndexSpan indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  Index operator[](std::size_t i) const { return indices_[i]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  bool is_subset_of(IndexSpan row) const { return contains_all(row, indices_); }

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern&, const Pattern&) = default;

 private:
  IndexSet indices_;
};

std::ostream& operator<<(std::ostream& os, const Pattern& pattern);

/// Binary class labels. `kAll` selects every observation.
enum class ClassSelector { kClass0, kClass1, kAll };

inline ClassSelector select_class(int label) {
  return label == 0 ? ClassSelector::kClass0 : ClassSelector::kClass1;
}

/// Observations as sorted active-variable index sets with binary labels.
///
/// Immutable after construction; every row is validated to be strictly
/// increasing and within [0, p).
class SparseDataset {
 public:
  SparseDataset() = default;
  SparseDataset(std::size_t p, std::vector<IndexSet> rows, std::vector<std::uint8_t> labels);

  std::size_t p() const noexcept { return p_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  IndexSpan row(std::size_t i) const { return rows_[i]; }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<IndexSet>& rows() const noexcept { return rows_; }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }

  std::size_t class_count(int label) const;

  /// Rows of one class, in dataset order.
  std::vector<IndexSpan> class_rows(int label) const;
  std::vector<IndexSpan> select(ClassSelector which) const;

  /// Copy with labels flipped so that `target` becomes class 1.
  SparseDataset with_target(int target) const;

  /// Copy restricted to the given observation positions, in that order.
  SparseDataset subset(std::span<const std::size_t> positions) const;

  /// Throws DataError unless both classes have at least one observation.
  void require_both_classes() const;

  friend bool operator==(const SparseDataset&, const SparseDataset&) = default;

 private:
  std::size_t p_ = 0;
  std::vector<IndexSet> rows_;
  std::vector<std::uint8_t> labels_;
};

// tsv-sparse format:
//   #p=<int>
//   <label>\t<space separated sorted 0-based indices>
SparseDataset read_tsv_sparse(std::istream& in);
SparseDataset load_dataset(const std::filesystem::path& path);
void write_tsv_sparse(std::ostream& out, const SparseDataset& ds);
void save_dataset(const std::filesystem::path& path, const SparseDataset& ds);

/// Exact Tic-Tac-Toe endgames with a winner, plus independent noise columns.
///
/// Variables 0-8 mark cells held by black (the first mover), 9-17 cells held
/// by white, 18.. are noise. Label 1 means black won.
SparseDataset generate_tictactoe(std::size_t noise_vars, double noise_density, std::uint64_t seed);

/// Two-class data where class 1 carries the interaction {0, 1} with no
/// marginal signal: every variable is Bernoulli(q_z), except that in class 1
/// variable 0 copies variable 1.
SparseDataset generate_planted(std::size_t p, std::size_t n1, std::size_t n0, double q_z,
                               std::uint64_t seed);

/// Independent Bernoulli(density) columns for both classes.
SparseDataset generate_independent(std::size_t p, std::size_t n1, std::size_t n0, double density,
                                   std::uint64_t seed);

/// Uniform shuffle, then the first round(train_fraction * n) go to training.
std::pair<SparseDataset, SparseDataset> split_train_test(const SparseDataset& ds,
                                                         double train_fraction,
                                                         std::uint64_t seed);

}  // namespace rit
