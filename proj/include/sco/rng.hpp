#ifndef SCO_RNG_HPP_
#define SCO_RNG_HPP_

#include <cstdint>
#include <limits>

namespace sco {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream key from a master seed and a stream label.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(master ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                           std::uint64_t b) noexcept {
  return derive_seed(derive_seed(master, a), b);
}

/// Counter-based generator: output n is mix64(key + (n+1) * golden gamma).
/// The full state is (key, counter), so streams can be copied, skipped and
/// replayed exactly. Satisfies UniformRandomBitGenerator, but callers should
/// use the member conversions below rather than <random> distributions,
/// whose algorithms are implementation-defined.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0, std::uint64_t counter = 0) noexcept
      : key_(key), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) noexcept { return uniform() < prob; }

  /// Uniform on {0, ..., n-1} via Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) noexcept {
    if (n <= 1) return 0;
    for (;;) {
      const Wide m = static_cast<Wide>((*this)()) * n;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= n || low >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  __extension__ typedef unsigned __int128 Wide;

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace sco

#endif  // SCO_RNG_HPP_
