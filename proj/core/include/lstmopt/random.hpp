#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <utility>

namespace lstmopt {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Folds a sequence of words into one 64-bit key.
std::uint64_t mix_key(std::initializer_list<std::uint64_t> words) noexcept;

// Counter-based generator: the n-th output is a pure function of (key, n), so
// streams keyed by (seed, index, tag) are reproducible in any order. Draws use
// only integer arithmetic and are identical across standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}
  CounterRng(std::initializer_list<std::uint64_t> words) noexcept : key_(mix_key(words)) {}

  std::uint64_t operator()() noexcept { return splitmix64(key_ ^ splitmix64(counter_++)); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // Uniform integer in [lo, hi] (inclusive), unbiased.
  long uniform_int(long lo, long hi) noexcept;

  // Uniform double in [0, 1).
  double uniform01() noexcept;

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<long>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace lstmopt
