#include "rit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "rit/error.hpp"
#include "rit/random.hpp"

namespace rit {

namespace {

// Stream tags keep the generators' RNG streams disjoint from each other.
constexpr std::uint64_t kPlantedStream = 0x504c414e54ULL;
constexpr std::uint64_t kIndependentStream = 0x494e444550ULL;
constexpr std::uint64_t kSplitStream = 0x53504c4954ULL;

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw DataError(what + " at line " + std::to_string(line));
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

bool is_canonical(IndexSpan values) {
  return std::adjacent_find(values.begin(), values.end(),
                            [](Index a, Index b) { return a >= b; }) == values.end();
}

bool contains_all(IndexSpan row, IndexSpan pattern) {
  return std::includes(row.begin(), row.end(), pattern.begin(), pattern.end());
}

Pattern::Pattern(IndexSet indices) : indices_(std::move(indices)) {
  if (!is_canonical(indices_)) throw DataError("pattern indices must be strictly increasing");
}

Pattern::Pattern(std::initializer_list<Index> indices) : Pattern(IndexSet(indices)) {}

Pattern Pattern::from_unsorted(IndexSet indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return Pattern(std::move(indices));
}

std::ostream& operator<<(std::ostream& os, const Pattern& pattern) {
  os << '{';
  for (std::size_t i = 0; i < pattern.size(); ++i) os << (i ? "," : "") << pattern[i];
  return os << '}';
}

SparseDataset::SparseDataset(std::size_t p, std::vector<IndexSet> rows,
                             std::vector<std::uint8_t> labels)
    : p_(p), rows_(std::move(rows)), labels_(std::move(labels)) {
  if (rows_.size() != labels_.size())
    throw DataError("labels must have exactly one entry per observation");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (labels_[i] > 1) throw DataError("label must be 0 or 1 (observation " + std::to_string(i) + ")");
    const auto& r = rows_[i];
    if (!is_canonical(r))
      throw DataError("unsorted or duplicate indices in observation " + std::to_string(i));
    if (!r.empty() && r.back() >= p_)
      throw DataError("index out of range in observation " + std::to_string(i));
  }
}

std::size_t SparseDataset::class_count(int label) const {
  return static_cast<std::size_t>(
      std::count(labels_.begin(), labels_.end(), static_cast<std::uint8_t>(label)));
}

std::vector<IndexSpan> SparseDataset::class_rows(int label) const {
  std::vector<IndexSpan> out;
  out.reserve(class_count(label));
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (labels_[i] == label) out.emplace_back(rows_[i]);
  return out;
}

std::vector<IndexSpan> SparseDataset::select(ClassSelector which) const {
  switch (which) {
    case ClassSelector::kClass0: return class_rows(0);
    case ClassSelector::kClass1: return class_rows(1);
    case ClassSelector::kAll: break;
  }
  return {rows_.begin(), rows_.end()};
}

SparseDataset SparseDataset::with_target(int target) const {
  if (target == 1) return *this;
  auto labels = labels_;
  for (auto& y : labels) y = static_cast<std::uint8_t>(1 - y);
  return SparseDataset(p_, rows_, std::move(labels));
}

SparseDataset SparseDataset::subset(std::span<const std::size_t> positions) const {
  std::vector<IndexSet> rows;
  std::vector<std::uint8_t> labels;
  rows.reserve(positions.size());
  labels.reserve(positions.size());
  for (auto i : positions) {
    rows.push_back(rows_.at(i));
    labels.push_back(labels_.at(i));
  }
  return SparseDataset(p_, std::move(rows), std::move(labels));
}

void SparseDataset::require_both_classes() const {
  if (class_count(0) == 0 || class_count(1) == 0)
    throw DataError("both classes need at least one observation");
}

SparseDataset read_tsv_sparse(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) fail_at(lineno, "missing header");
  if (!line.starts_with("#p=")) fail_at(lineno, "malformed header (expected #p=<int>)");
  std::size_t p = 0;
  if (!parse_number(std::string_view(line).substr(3), p)) fail_at(lineno, "malformed header");

  std::vector<IndexSet> rows;
  std::vector<std::uint8_t> labels;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view view(line);
    const auto tab = view.find('\t');
    const auto label_text = view.substr(0, tab);
    if (label_text != "0" && label_text != "1") fail_at(lineno, "label must be 0 or 1");
    labels.push_back(static_cast<std::uint8_t>(label_text[0] - '0'));

    IndexSet row;
    if (tab != std::string_view::npos) {
      std::istringstream fields(std::string(view.substr(tab + 1)));
      std::string token;
      while (fields >> token) {
        Index k = 0;
        if (!parse_number(std::string_view(token), k)) fail_at(lineno, "malformed index '" + token + "'");
        if (k >= p) fail_at(lineno, "index " + token + " out of range");
        if (!row.empty() && k == row.back()) fail_at(lineno, "duplicate indices");
        if (!row.empty() && k < row.back()) fail_at(lineno, "unsorted indices");
        row.push_back(k);
      }
    }
    rows.push_back(std::move(row));
  }
  return SparseDataset(p, std::move(rows), std::move(labels));
}

SparseDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_tsv_sparse(in);
}

void write_tsv_sparse(std::ostream& out, const SparseDataset& ds) {
  out << "#p=" << ds.p() << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.label(i) << '\t';
    const auto row = ds.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const SparseDataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_tsv_sparse(out, ds);
  if (!out) throw DataError("write failed for " + path.string());
}

SparseDataset generate_planted(std::size_t p, std::size_t n1, std::size_t n0, double q_z,
                               std::uint64_t seed) {
  if (p < 2) throw ConfigError("planted data needs p >= 2");
  if (n1 == 0 || n0 == 0) throw ConfigError("planted data needs n1, n0 >= 1");
  if (!(q_z > 0.0 && q_z <= 1.0)) throw ConfigError("q_z must lie in (0, 1]");

  Stream rng(seed, kPlantedStream);
  std::vector<IndexSet> rows;
  std::vector<std::uint8_t> labels;
  rows.reserve(n1 + n0);
  for (std::size_t i = 0; i < n1 + n0; ++i) {
    const bool positive = i < n1;
    IndexSet row;
    bool first = bernoulli(rng, q_z);
    bool second = bernoulli(rng, q_z);
    if (positive) first = second;
    if (first) row.push_back(0);
    if (second) row.push_back(1);
    for (std::size_t k = 2; k < p; ++k)
      if (bernoulli(rng, q_z)) row.push_back(static_cast<Index>(k));
    rows.push_back(std::move(row));
    labels.push_back(positive ? 1 : 0);
  }
  return SparseDataset(p, std::move(rows), std::move(labels));
}

SparseDataset generate_independent(std::size_t p, std::size_t n1, std::size_t n0, double density,
                                   std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw ConfigError("density must lie in [0, 1]");
  Stream rng(seed, kIndependentStream);
  std::vector<IndexSet> rows;
  std::vector<std::uint8_t> labels;
  for (std::size_t i = 0; i < n1 + n0; ++i) {
    IndexSet row;
    for (std::size_t k = 0; k < p; ++k)
      if (bernoulli(rng, density)) row.push_back(static_cast<Index>(k));
    rows.push_back(std::move(row));
    labels.push_back(i < n1 ? 1 : 0);
  }
  return SparseDataset(p, std::move(rows), std::move(labels));
}

std::pair<SparseDataset, SparseDataset> split_train_test(const SparseDataset& ds,
                                                         double train_fraction,
                                                         std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train fraction must lie in (0, 1)");
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Stream rng(seed, kSplitStream);
  shuffle(rng, std::span<std::size_t>(order));
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(ds.size())));
  const std::span<const std::size_t> all(order);
  return {ds.subset(all.first(n_train)), ds.subset(all.subspan(n_train))};
}

}  // namespace rit
