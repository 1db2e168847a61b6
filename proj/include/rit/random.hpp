#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace rit {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based random stream keyed by (seed, a, b).
///
/// The n-th output is a pure function of the key and n, so any stream can be
/// reconstructed independently of how many other streams were consumed before
/// it. This is what keeps tree growth and hash-matrix construction
/// bit-identical across thread counts.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept
      : key_(splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return splitmix64(key_ + 0xd1b54a32d192ed03ULL * ++counter_); }

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform integer in [0, bound). Lemire's multiply-shift with rejection, so the
/// result does not depend on the standard library's distribution classes.
template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 bits of precision.
template <class Rng>
double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class Rng>
bool bernoulli(Rng& rng, double p) {
  return uniform_unit(rng) < p;
}

/// Fisher-Yates shuffle.
template <class Rng, class T>
void shuffle(Rng& rng, std::span<T> values) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(values[i - 1], values[j]);
  }
}

}  // namespace rit
