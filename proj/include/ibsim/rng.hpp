#ifndef IBSIM_RNG_HPP
#define IBSIM_RNG_HPP

#include <cstdint>

namespace ibsim {

// splitmix64. Counter-based, so identical seeds give identical streams on
// every platform, which keeps synthetic traces and random schedules
// reproducible byte for byte.
class splitmix64 {
 public:
  explicit splitmix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 bits of resolution.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), n > 0. The modulo bias is irrelevant at the range
  // sizes used here (well below 2^32).
  uint64_t next_below(uint64_t n) { return next() % n; }

 private:
  uint64_t state_;
};

}  // namespace ibsim

#endif  // IBSIM_RNG_HPP
