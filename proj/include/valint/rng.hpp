#pragma once

#include <cstdint>
#include <random>

namespace valint {

/// mt19937_64 with its own range reduction, so that draws are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform-ish in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }
  /// In [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  bool coin() { return (eng_() >> 11) & 1u; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace valint
