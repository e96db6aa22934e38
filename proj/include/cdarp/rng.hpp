#ifndef CDARP_RNG_HPP
#define CDARP_RNG_HPP

#include <cstdint>
#include <random>
#include <span>

namespace cdarp {

// Deterministic RNG wrapper. Distributions are implemented here rather than
// with std:: distribution objects so that streams are reproducible across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  int below(int n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return static_cast<int>(v % bound);
  }

  // index drawn with probability w_i / sum(w); non-positive total falls back
  // to the uniform distribution. Entries with weight < 0 are treated as 0.
  int pick_weighted(std::span<const double> w) {
    double total = 0;
    for (double x : w) total += x > 0 ? x : 0;
    if (!(total > 0)) return below(static_cast<int>(w.size()));
    double target = uniform01() * total;
    for (int i = 0; i < static_cast<int>(w.size()); ++i) {
      const double x = w[i] > 0 ? w[i] : 0;
      if (target < x) return i;
      target -= x;
    }
    return static_cast<int>(w.size()) - 1;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cdarp

#endif
