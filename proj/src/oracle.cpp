#include "rit/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "rit/error.hpp"

namespace rit::oracle {

namespace {

constexpr double kMaxSubsets = 1e7;
constexpr std::size_t kMaxEnumeration = 8;

std::vector<std::vector<std::uint32_t>> tid_lists(const std::vector<IndexSpan>& rows, std::size_t p) {
  std::vector<std::vector<std::uint32_t>> tids(p);
  for (std::uint32_t i = 0; i < rows.size(); ++i)
    for (Index k : rows[i]) tids[k].push_back(i);
  return tids;
}

std::vector<std::uint32_t> meet(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct Search {
  std::size_t p, max_size;
  double theta0, theta1, n0, n1;
  std::vector<std::vector<std::uint32_t>> tids1, tids0;
  std::vector<Pattern> found;
  IndexSet current;

  void extend(Index from, const std::vector<std::uint32_t>* cover1, const std::vector<std::uint32_t>* cover0) {
    for (Index k = from; k < p; ++k) {
      auto c1 = cover1 ? meet(*cover1, tids1[k]) : tids1[k];
      if (static_cast<double>(c1.size()) / n1 < theta1) continue;  // supersets cannot recover
      auto c0 = cover0 ? meet(*cover0, tids0[k]) : tids0[k];
      current.push_back(k);
      if (static_cast<double>(c0.size()) / n0 <= theta0) found.emplace_back(current);
      if (current.size() < max_size) extend(k + 1, &c1, &c0);
      current.pop_back();
    }
  }
};

double subset_count(std::size_t p, std::size_t max_size) {
  double total = 0.0, choose = 1.0;
  for (std::size_t k = 1; k <= std::min(p, max_size); ++k) {
    choose = choose * static_cast<double>(p - k + 1) / static_cast<double>(k);
    total += choose;
  }
  return total;
}

std::int64_t factorial(std::size_t n) {
  std::int64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<std::int64_t>(i);
  return f;
}

}  // namespace

std::vector<Pattern> brute_force_patterns(const SparseDataset& ds, std::size_t max_size,
                                          double theta0, double theta1) {
  if (!(theta0 >= 0.0 && theta0 < theta1 && theta1 <= 1.0))
    throw ConfigError("thresholds must satisfy 0 <= theta0 < theta1 <= 1");
  ds.require_both_classes();
  if (subset_count(ds.p(), max_size) > kMaxSubsets)
    throw ConfigError("brute force would enumerate more than 10^7 subsets");

  const auto class1 = ds.class_rows(1);
  const auto class0 = ds.class_rows(0);
  Search search{ds.p(),
                max_size,
                theta0,
                theta1,
                static_cast<double>(class0.size()),
                static_cast<double>(class1.size()),
                tid_lists(class1, ds.p()),
                tid_lists(class0, ds.p()),
                {},
                {}};
  if (max_size > 0) search.extend(0, nullptr, nullptr);
  std::sort(search.found.begin(), search.found.end());
  return std::move(search.found);
}

std::vector<Rational> min_hash_law(std::size_t n, std::span<const std::size_t> support) {
  if (n == 0 || n > kMaxEnumeration) throw ConfigError("min_hash_law enumerates n! orderings; need 1 <= n <= 8");
  std::vector<bool> in_support(n + 1, false);
  for (auto pos : support) {
    if (pos < 1 || pos > n) throw ConfigError("support position out of range");
    in_support[pos] = true;
  }
  if (support.empty()) throw ConfigError("support must be nonempty");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{1});
  std::vector<std::int64_t> counts(n, 0);
  do {
    for (std::size_t i = 0; i < n; ++i) {
      if (in_support[order[i]]) {
        ++counts[i];
        break;
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));

  const auto total = factorial(n);
  std::vector<Rational> pmf;
  pmf.reserve(n);
  for (auto c : counts) pmf.emplace_back(c, total);
  return pmf;
}

Rational pmf_mean(std::span<const Rational> pmf) {
  Rational mean(0);
  for (std::size_t l = 0; l < pmf.size(); ++l) mean += pmf[l] * static_cast<std::int64_t>(l + 1);
  return mean;
}

Rational pmf_variance(std::span<const Rational> pmf) {
  Rational second(0);
  for (std::size_t l = 0; l < pmf.size(); ++l) {
    const auto pos = static_cast<std::int64_t>(l + 1);
    second += pmf[l] * (pos * pos);
  }
  const auto mean = pmf_mean(pmf);
  return second - mean * mean;
}

Rational exhaustive_pi1(std::span<const IndexSpan> rows, IndexSpan pattern) {
  const auto n = rows.size();
  if (n == 0 || n > kMaxEnumeration) throw ConfigError("exhaustive_pi1 needs 1 <= n <= 8 rows");
  if (pattern.empty()) throw ConfigError("pi1 is undefined for the empty pattern");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::int64_t agree = 0;
  do {
    std::optional<std::size_t> common;
    bool same = true;
    for (Index k : pattern) {
      std::optional<std::size_t> first;
      for (std::size_t pos = 0; pos < n && !first; ++pos)
        if (std::binary_search(rows[order[pos]].begin(), rows[order[pos]].end(), k)) first = pos;
      if (!first || (common && *common != *first)) {
        same = false;
        break;
      }
      common = first;
    }
    if (same) ++agree;
  } while (std::next_permutation(order.begin(), order.end()));
  return Rational(agree, factorial(n));
}

Rational union_fraction(std::span<const IndexSpan> rows, IndexSpan pattern) {
  if (rows.empty()) throw ConfigError("empty selection");
  const auto hits = std::count_if(rows.begin(), rows.end(), [&](IndexSpan row) {
    return std::any_of(pattern.begin(), pattern.end(),
                       [&](Index k) { return std::binary_search(row.begin(), row.end(), k); });
  });
  return Rational(hits, static_cast<std::int64_t>(rows.size()));
}

Rational containment_fraction(std::span<const IndexSpan> rows, IndexSpan pattern) {
  if (rows.empty()) throw ConfigError("empty selection");
  const auto hits = std::count_if(rows.begin(), rows.end(),
                                  [&](IndexSpan row) { return contains_all(row, pattern); });
  return Rational(hits, static_cast<std::int64_t>(rows.size()));
}

}  // namespace rit::oracle
