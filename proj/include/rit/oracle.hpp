#pragma once

// Ground-truth engines for validation: exhaustive pattern search and exact
// permutation enumeration of min-wise hash laws. Small inputs only.

#include <cstddef>
#include <span>
#include <vector>

#include "rit/dataset.hpp"
#include "rit/minhash.hpp"

namespace rit::oracle {

/// Every nonempty pattern of size <= max_size with class-1 prevalence >=
/// theta1 and class-0 prevalence <= theta0, in canonical order. Supersets of
/// a pattern below theta1 are skipped. Throws ConfigError when more than 10^7
/// subsets would need enumerating.
std::vector<Pattern> brute_force_patterns(const SparseDataset& ds, std::size_t max_size,
                                          double theta0, double theta1);

/// Exact pmf of the first position, under a uniform ordering of n items, at
/// which an element of `support` (1-based positions) appears. Entry l-1 holds
/// P(min = l). Enumerates all n! orderings; n <= 8.
std::vector<Rational> min_hash_law(std::size_t n, std::span<const std::size_t> support);

Rational pmf_mean(std::span<const Rational> pmf);
Rational pmf_variance(std::span<const Rational> pmf);

/// pi1 of a pattern by definition: the fraction of all orderings of `rows`
/// under which every variable of the pattern has the same (realised) min-wise
/// hash. 0 when the pattern's union support is empty. rows.size() <= 8.
Rational exhaustive_pi1(std::span<const IndexSpan> rows, IndexSpan pattern);

/// pi2 by definition: fraction of rows containing at least one pattern variable.
Rational union_fraction(std::span<const IndexSpan> rows, IndexSpan pattern);

/// Fraction of rows containing the whole pattern.
Rational containment_fraction(std::span<const IndexSpan> rows, IndexSpan pattern);

}  // namespace rit::oracle
