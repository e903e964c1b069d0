#ifndef IBSIM_TESTS_HELPERS_HPP
#define IBSIM_TESTS_HELPERS_HPP

#include <cstdint>
#include <vector>

#include "ibsim/rng.hpp"
#include "ibsim/schedule.hpp"
#include "ibsim/trace.hpp"

namespace ibsim::testutil {

// Two-address scenario used by the aliveness tests: the first address is read
// once and later overwritten, the second is read once and then overwritten
// twice (the second store hitting an already-dead address).
inline trace two_address_scenario() {
  trace t;
  t.events = {
      {5, 0x0C, mem_op::load},
      {7, 0x10, mem_op::load},
      {10, 0x0C, mem_op::store},
      {12, 0x10, mem_op::store},
      {15, 0x10, mem_op::store},
  };
  return t;
}

inline trace make_random_trace(uint64_t seed, uint64_t n_events = 500,
                               uint32_t range_words = 256, double stores = 0.4,
                               locality pattern = locality::uniform) {
  synth_profile p;
  p.n_events = n_events;
  p.addr_range_words = range_words;
  p.store_fraction = stores;
  p.pattern = pattern;
  return gen_synthetic_trace(p, seed);
}

// Random schedule guaranteed to cover the trace, with a handful of interior
// boundaries drawn uniformly from the trace's cycle range.
inline failure_schedule make_random_schedule(const trace& t, uint64_t seed,
                                             size_t max_boundaries = 6) {
  splitmix64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  uint64_t last = t.last_cycle();
  std::vector<uint64_t> bs;
  size_t n = 1 + rng.next_below(max_boundaries);
  for (size_t i = 0; i < n; ++i) bs.push_back(1 + rng.next_below(last + 1));
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  if (bs.empty() || bs.back() <= last) bs.push_back(last + 1);
  failure_schedule s;
  s.boundaries = std::move(bs);
  return s;
}

}  // namespace ibsim::testutil

#endif  // IBSIM_TESTS_HELPERS_HPP
