#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace miriad {

// Deterministic draws over std::mt19937_64. The engine's sequence is pinned
// by the standard; library distributions are not, so draws are derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0, n); unbiased via rejection
  std::uint64_t below(std::uint64_t n) {
    if (n < 2) return 0;
    std::uint64_t cut = (~n + 1) % n;  // 2^64 mod n
    std::uint64_t r = eng_();
    while (r < cut) r = eng_();
    return r % n;
  }

  // uniform in [0, 1)
  double unit() { return double(eng_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  template <typename T>
  const T& pick(std::span<const T> pool) {
    return pool[std::size_t(below(pool.size()))];
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace miriad
