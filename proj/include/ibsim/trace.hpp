#ifndef IBSIM_TRACE_HPP
#define IBSIM_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ibsim/schedule.hpp"

namespace ibsim {

enum class mem_op : uint8_t { load, store };

// One 32-bit memory access. addr is a byte address and must be word aligned.
struct trace_event {
  uint64_t cycle;
  uint32_t addr;
  mem_op kind;

  uint32_t word() const { return addr >> 2; }
  friend bool operator==(const trace_event&, const trace_event&) = default;
};

// Access sequence of one program run. Events are ordered by cycle; ties keep
// file order.
struct trace {
  std::vector<trace_event> events;

  uint64_t last_cycle() const { return events.empty() ? 0 : events.back().cycle; }
  friend bool operator==(const trace&, const trace&) = default;
};

// Whole-run address statistics. For an empty trace every field is zero.
struct footprint {
  uint64_t distinct_words = 0;
  uint32_t min_addr = 0;
  uint32_t max_addr = 0;
  uint64_t span_words = 0;  // contiguous words between min_addr and max_addr
  uint64_t n_load = 0;
  uint64_t n_store = 0;
};

/**
 * Text format, one access per line:
 *
 *   <cycle> <LD|ST> <hex-addr>
 *
 * Cycles are decimal and non-decreasing, addresses hex with optional 0x
 * prefix (either case). '#' starts a comment, blank lines are skipped.
 * A leading extra column of interval numbers is tolerated and ignored.
 */
trace parse_trace(std::istream& in);
void serialize_trace(const trace& t, std::ostream& out);

// File variants. Paths ending in .gz are transparently (de)compressed.
trace load_trace(const std::string& path);
void save_trace(const trace& t, const std::string& path);

footprint compute_footprint(const trace& t);

struct interval_counts {
  uint64_t n_load = 0;
  uint64_t n_store = 0;
};

// Loads and stores executed in each interval of the schedule. Throws
// schedule_too_short when an event lies past the final boundary.
std::vector<interval_counts> interval_access_counts(const trace& t, const failure_schedule& s);

enum class locality : uint8_t { sequential, uniform, looped };

struct synth_profile {
  uint64_t n_events = 0;
  uint32_t addr_range_words = 1024;
  double store_fraction = 0.3;
  locality pattern = locality::uniform;
};

// Deterministic synthetic workload: cycles advance by a random stride of
// 1..10 per event. sequential walks the range in order, uniform draws
// addresses independently, looped sweeps a small window several times before
// moving on (heavy reuse, the interesting case for backup tracking).
trace gen_synthetic_trace(const synth_profile& profile, uint64_t seed);

}  // namespace ibsim

#endif  // IBSIM_TRACE_HPP
