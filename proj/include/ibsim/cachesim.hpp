#ifndef IBSIM_CACHESIM_HPP
#define IBSIM_CACHESIM_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "ibsim/schedule.hpp"
#include "ibsim/trace.hpp"

namespace ibsim {

// 4-way set-associative write-back cache with 8-word (32-byte) lines and LRU
// replacement, sitting in front of the NVM in the cache-based architecture.
struct cache_config {
  uint32_t size_bytes = 4096;  // one of 2048, 4096, 8192, 16384
  uint32_t ways = 4;
  uint32_t line_words = 8;

  uint32_t line_bytes() const { return line_words * 4; }
  uint32_t n_sets() const { return size_bytes / (ways * line_bytes()); }
  uint32_t n_lines() const { return n_sets() * ways; }
  void validate() const;  // throws invalid_cache_config
};

struct cache_stats {
  uint64_t n_hit_r = 0;
  uint64_t n_hit_w = 0;
  uint64_t n_miss = 0;
  uint64_t n_evict_words = 0;    // words written back on dirty evictions
  uint64_t n_flush_lines = 0;    // dirty lines written back at failures
  uint64_t n_lines_scanned = 0;  // every line is examined once per failure

  std::string to_json() const;
  void write_csv(std::ostream& out) const;
};

// Runs the trace through the cache. Misses allocate on both reads and writes;
// a dirty victim costs a line writeback. At every interior boundary (a real
// power failure) all lines are scanned, dirty ones are flushed to NVM and the
// cache restarts cold.
cache_stats simulate_cache(const trace& t, const failure_schedule& s,
                           const cache_config& cfg);

// Per-access and per-word costs feeding the cache energy model, picojoules.
// Tag-miss detection is priced like a hit lookup.
struct cache_cost_params {
  double e_hit_pj = 0;      // hit lookup, also the per-line scan cost at a flush
  double e_miss_pj = 0;     // equal to e_hit_pj in the bundled tables
  double e_cache_w_pj = 0;  // writing one word into the cache array
  double e_nvm_r_pj = 0;
  double e_nvm_w_pj = 0;
  uint64_t cache_lines = 0;  // geometry, for the per-failure scan term
};

struct cache_energy_breakdown {
  double hits_pj = 0;
  double misses_pj = 0;
  double flushes_pj = 0;
  double total_pj() const { return hits_pj + misses_pj + flushes_pj; }
};

// hits:    read hits pay a lookup; write hits pay a lookup plus a word write.
// misses:  each miss pays the lookup plus an 8-word line fill (NVM read and
//          cache write per word); dirty evictions pay NVM writes per word.
// flushes: each failure scans every line, and each dirty line pays an 8-word
//          NVM writeback.
cache_energy_breakdown cache_energy(const cache_stats& st, const cache_cost_params& p,
                                    uint64_t n_failures);

}  // namespace ibsim

#endif  // IBSIM_CACHESIM_HPP
