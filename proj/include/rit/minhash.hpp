#pragma once

#include <Eigen/Core>
#include <boost/rational.hpp>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>

#include "rit/dataset.hpp"

namespace rit {

using Rational = boost::rational<std::int64_t>;

/// L x p table of min-wise hash values over one class's observations.
///
/// Entry (l, k) is the 1-based position of the first observation containing
/// variable k under the l-th random ordering of the observations, or kNever
/// when k is absent from every hashed observation.
class MinHashMatrix {
 public:
  using Entry = std::uint32_t;
  using Table = Eigen::Matrix<Entry, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  static constexpr Entry kNever = std::numeric_limits<Entry>::max();

  MinHashMatrix() = default;
  MinHashMatrix(Table table, std::size_t n, std::uint64_t seed);

  std::size_t permutations() const noexcept { return static_cast<std::size_t>(table_.rows()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(table_.cols()); }
  std::size_t n() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const Table& table() const noexcept { return table_; }
  Entry operator()(std::size_t l, std::size_t k) const { return table_(l, k); }

  friend bool operator==(const MinHashMatrix& a, const MinHashMatrix& b) {
    return a.n_ == b.n_ && a.seed_ == b.seed_ && a.table_.rows() == b.table_.rows() &&
           a.table_.cols() == b.table_.cols() && a.table_ == b.table_;
  }

 private:
  Table table_;
  std::size_t n_ = 0;
  std::uint64_t seed_ = 0;
};

/// Row l uses the permutation drawn from Stream(seed, tag, l), so the result
/// does not depend on `threads`.
MinHashMatrix build_hash_matrix(std::span<const IndexSpan> rows, std::size_t p,
                                std::size_t permutations, std::uint64_t seed, unsigned threads = 1);
MinHashMatrix build_hash_matrix(const SparseDataset& ds, int class_label, std::size_t permutations,
                                std::uint64_t seed, unsigned threads = 1);

/// Fraction of rows in which every variable of the pattern shares one
/// non-sentinel hash value. Estimates |support intersection| / |support union|.
double estimate_pi1(const MinHashMatrix& h, IndexSpan pattern);

/// Union-support fraction recovered from the mean row-minimum m:
/// ((n+1)/n) * (1/m - 1/(n+1)). Returns exactly 0 when the pattern occurs in
/// no hashed observation.
double estimate_pi2(const MinHashMatrix& h, IndexSpan pattern);

/// pi1 * pi2; the empty pattern has prevalence 1.
double estimate_prevalence(const MinHashMatrix& h, IndexSpan pattern);

inline double estimate_pi1(const MinHashMatrix& h, const Pattern& s) { return estimate_pi1(h, s.indices()); }
inline double estimate_pi2(const MinHashMatrix& h, const Pattern& s) { return estimate_pi2(h, s.indices()); }
inline double estimate_prevalence(const MinHashMatrix& h, const Pattern& s) {
  return estimate_prevalence(h, s.indices());
}

/// Fraction of `rows` containing the pattern. Throws on an empty selection.
double exact_prevalence(std::span<const IndexSpan> rows, IndexSpan pattern);
double exact_prevalence(const SparseDataset& ds, const Pattern& pattern, ClassSelector which);

/// E[min position] of an r-element support under a uniform ordering of n: (n+1)/(r+1).
Rational expected_min_hash(std::int64_t n, std::int64_t r);

/// Var[min position] = r(n-r)(n+1) / ((r+1)^2 (r+2)).
Rational min_hash_variance(std::int64_t n, std::int64_t r);

// Binary dump: four little-endian uint64 (L, n, p, seed), then L*p uint32
// entries row-major, with kNever written as 0.
void write_hash_matrix(std::ostream& out, const MinHashMatrix& h);
MinHashMatrix read_hash_matrix(std::istream& in);

}  // namespace rit
