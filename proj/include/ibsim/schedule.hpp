#ifndef IBSIM_SCHEDULE_HPP
#define IBSIM_SCHEDULE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ibsim {

/**
 * Power-failure boundaries laid over a trace's cycle axis.
 *
 * Boundaries are strictly increasing absolute cycle numbers. Interval i spans
 * cycles [boundaries[i-1], boundaries[i]) with an implicit start at cycle 0,
 * so an access on the exact boundary cycle executes after the restore and is
 * counted in the next interval. The final boundary lies past the last trace
 * cycle: the program completes inside the last interval, which is why a run
 * with n intervals suffers only n - 1 interruptions.
 */
struct failure_schedule {
  std::vector<uint64_t> boundaries;

  size_t n_intervals() const { return boundaries.size(); }
  size_t n_interruptions() const { return boundaries.empty() ? 0 : boundaries.size() - 1; }
  uint64_t end() const { return boundaries.empty() ? 0 : boundaries.back(); }
  bool covers(uint64_t cycle) const { return cycle < end(); }

  // Index of the interval that executes the given cycle. Throws
  // schedule_too_short when the cycle lies on or past the final boundary.
  size_t interval_of(uint64_t cycle) const;

  std::string to_json() const;
  static failure_schedule from_json(const std::string& text);
};

// Failures every n_prog_cycles cycles: boundaries at each multiple, up to and
// including the first multiple past last_cycle. Throws invalid_interval_length
// when n_prog_cycles is zero.
failure_schedule fixed_schedule(uint64_t last_cycle, uint64_t n_prog_cycles);

// Every cycle independently ends an interval with the given probability.
// Sampled as geometric gaps, which is distribution-identical to the per-cycle
// coin flip but costs O(failures) instead of O(cycles). A final boundary at
// last_cycle + 1 marks program completion. Throws invalid_probability unless
// 0 < p < 1.
failure_schedule random_schedule(uint64_t last_cycle, double failure_prob_per_cycle,
                                 uint64_t seed);

}  // namespace ibsim

#endif  // IBSIM_SCHEDULE_HPP
