#include "rit/minhash.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <thread>
#include <vector>

#include "rit/error.hpp"
#include "rit/random.hpp"

namespace rit {

namespace {

constexpr std::uint64_t kHashStream = 0x4d494e48415348ULL;

void fill_rows(MinHashMatrix::Table& table, std::span<const IndexSpan> rows, std::uint64_t seed,
               std::size_t first, std::size_t last) {
  std::vector<std::uint32_t> order(rows.size());
  for (std::size_t l = first; l < last; ++l) {
    std::iota(order.begin(), order.end(), 0u);
    Stream rng(seed, kHashStream, l);
    shuffle(rng, std::span<std::uint32_t>(order));
    auto row = table.row(static_cast<Eigen::Index>(l));
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      for (Index k : rows[order[pos]]) {
        auto& entry = row(static_cast<Eigen::Index>(k));
        if (entry == MinHashMatrix::kNever) entry = static_cast<MinHashMatrix::Entry>(pos + 1);
      }
    }
  }
}

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw DataError("truncated hash matrix header");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace

MinHashMatrix::MinHashMatrix(Table table, std::size_t n, std::uint64_t seed)
    : table_(std::move(table)), n_(n), seed_(seed) {}

MinHashMatrix build_hash_matrix(std::span<const IndexSpan> rows, std::size_t p,
                                std::size_t permutations, std::uint64_t seed, unsigned threads) {
  if (rows.empty()) throw DataError("cannot hash an empty class");
  if (permutations == 0) throw ConfigError("need at least one permutation");
  if (rows.size() >= MinHashMatrix::kNever) throw DataError("too many observations to hash");

  MinHashMatrix::Table table = MinHashMatrix::Table::Constant(
      static_cast<Eigen::Index>(permutations), static_cast<Eigen::Index>(p), MinHashMatrix::kNever);

  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(permutations));
  if (threads == 1) {
    fill_rows(table, rows, seed, 0, permutations);
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (permutations + threads - 1) / threads;
    for (std::size_t first = 0; first < permutations; first += chunk)
      workers.emplace_back(fill_rows, std::ref(table), rows, seed, first,
                           std::min(permutations, first + chunk));
  }
  return MinHashMatrix(std::move(table), rows.size(), seed);
}

MinHashMatrix build_hash_matrix(const SparseDataset& ds, int class_label, std::size_t permutations,
                                std::uint64_t seed, unsigned threads) {
  const auto rows = ds.class_rows(class_label);
  return build_hash_matrix(rows, ds.p(), permutations, seed, threads);
}

double estimate_pi1(const MinHashMatrix& h, IndexSpan pattern) {
  if (pattern.empty()) throw ConfigError("pi1 is undefined for the empty pattern");
  const auto cols = h.table()(Eigen::all, pattern);
  const auto lo = cols.rowwise().minCoeff().array().eval();
  const auto hi = cols.rowwise().maxCoeff().array().eval();
  const auto agree = ((lo == hi) && (lo != MinHashMatrix::kNever)).count();
  return static_cast<double>(agree) / static_cast<double>(h.permutations());
}

double estimate_pi2(const MinHashMatrix& h, IndexSpan pattern) {
  if (pattern.empty()) throw ConfigError("pi2 is undefined for the empty pattern");
  const auto lo = h.table()(Eigen::all, pattern).rowwise().minCoeff().eval();
  if ((lo.array() == MinHashMatrix::kNever).any()) return 0.0;
  const double n = static_cast<double>(h.n());
  const double mean_min = lo.cast<double>().mean();
  return (n + 1.0) / n * (1.0 / mean_min - 1.0 / (n + 1.0));
}

double estimate_prevalence(const MinHashMatrix& h, IndexSpan pattern) {
  if (pattern.empty()) return 1.0;
  const double pi1 = estimate_pi1(h, pattern);
  if (pi1 == 0.0) return 0.0;
  return pi1 * estimate_pi2(h, pattern);
}

double exact_prevalence(std::span<const IndexSpan> rows, IndexSpan pattern) {
  if (rows.empty()) throw DataError("prevalence over an empty selection");
  const auto hits = std::count_if(rows.begin(), rows.end(),
                                  [&](IndexSpan row) { return contains_all(row, pattern); });
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

double exact_prevalence(const SparseDataset& ds, const Pattern& pattern, ClassSelector which) {
  const auto rows = ds.select(which);
  return exact_prevalence(rows, pattern.indices());
}

Rational expected_min_hash(std::int64_t n, std::int64_t r) {
  if (r < 1 || r > n) throw ConfigError("expected_min_hash needs 1 <= r <= n");
  return Rational(n + 1, r + 1);
}

Rational min_hash_variance(std::int64_t n, std::int64_t r) {
  if (r < 1 || r > n) throw ConfigError("min_hash_variance needs 1 <= r <= n");
  return Rational(r * (n - r) * (n + 1), (r + 1) * (r + 1) * (r + 2));
}

void write_hash_matrix(std::ostream& out, const MinHashMatrix& h) {
  write_u64(out, h.permutations());
  write_u64(out, h.n());
  write_u64(out, h.p());
  write_u64(out, h.seed());
  const auto& t = h.table();
  for (Eigen::Index l = 0; l < t.rows(); ++l) {
    for (Eigen::Index k = 0; k < t.cols(); ++k) {
      const std::uint32_t v = t(l, k) == MinHashMatrix::kNever ? 0 : t(l, k);
      const unsigned char bytes[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                      static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
      out.write(reinterpret_cast<const char*>(bytes), 4);
    }
  }
}

MinHashMatrix read_hash_matrix(std::istream& in) {
  const auto rows = read_u64(in);
  const auto n = read_u64(in);
  const auto p = read_u64(in);
  const auto seed = read_u64(in);
  MinHashMatrix::Table table(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p));
  for (Eigen::Index l = 0; l < table.rows(); ++l) {
    for (Eigen::Index k = 0; k < table.cols(); ++k) {
      unsigned char bytes[4];
      if (!in.read(reinterpret_cast<char*>(bytes), 4)) throw DataError("truncated hash matrix body");
      const std::uint32_t v = bytes[0] | (bytes[1] << 8) | (bytes[2] << 16) |
                              (static_cast<std::uint32_t>(bytes[3]) << 24);
      if (v > n) throw DataError("hash value exceeds observation count");
      table(l, k) = v == 0 ? MinHashMatrix::kNever : v;
    }
  }
  return MinHashMatrix(std::move(table), n, seed);
}

}  // namespace rit
