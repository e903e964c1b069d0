#ifndef IBSIM_CONTROLLER_HPP
#define IBSIM_CONTROLLER_HPP

#include <cstdint>
#include <vector>

#include "ibsim/strategies.hpp"
#include "ibsim/trace.hpp"

namespace ibsim {

struct timing_params {
  double cpu_period_s = 1.0 / 24e6;  // 24 MHz core and SRAM
  double nvm_period_s = 125e-9;      // one NVM word access per 125 ns
  double t_off_avg_s = 0.0;          // mean power-off duration per failure
};

enum class ctrl_phase : uint8_t { execute, backup, off, restore };

/**
 * Behavioral model of the backup controller hardware. It spies on the store
 * address bus during execution and flags the containing block in a dirty map;
 * on a power failure it walks the map and copies each flagged block to NVM
 * word by word; on resume it refills the whole SRAM from NVM before releasing
 * the core.
 */
class backup_controller {
 public:
  backup_controller(uint64_t mem_words, uint32_t block_size_words, uint32_t base_word);

  void observe_store(uint32_t word_index);

  // Drains the dirty map as at a power failure. Returns the number of words
  // written to NVM (equals the spent NVM cycles); out, when given, receives
  // the absolute word indices saved.
  uint64_t backup(word_set* out);

  // Full-memory refill on resume; returns the spent NVM cycles.
  uint64_t restore();

  ctrl_phase phase() const { return phase_; }
  const dirty_bit_map& dirty() const { return dirty_; }

 private:
  uint64_t mem_words_;
  uint32_t base_word_;
  dirty_bit_map dirty_;
  ctrl_phase phase_ = ctrl_phase::execute;
  uint64_t backup_cursor_ = 0;  // next block to scan while in the backup phase
};

struct controller_result {
  std::vector<uint64_t> words_saved;     // per interval; last entry is the
                                         // would-be size at completion
  std::vector<uint64_t> backup_cycles;   // NVM cycles per backup, == words_saved
  std::vector<uint64_t> restore_cycles;  // mem_words per resume, 0 for interval 0
  std::vector<word_set> saved_words;     // filled only when record_sets
};

// Drives the controller through a trace under a failure schedule with
// block-granular tracking. mem_words must cover the footprint span once the
// base is aligned down to a block boundary; otherwise mem_too_small.
controller_result run_controller(const trace& t, const failure_schedule& s,
                                 uint32_t block_size_words, uint64_t mem_words,
                                 bool record_sets = false);

// words * nvm_period: the copy pipeline moves one word per NVM cycle.
double backup_time(uint64_t words, const timing_params& tp);
double restore_time(uint64_t words, const timing_params& tp);

// Checkpointing architectures that persist state through a parallel NVM array
// need 1.02 ms per 4 KB, paid in 1 KB pages.
double nvp_backup_time(uint64_t used_bytes);

// Wall-clock span of a run: program time plus, per interruption, the save,
// the restore and the average off period.
double exec_time(double t_prog_s, uint64_t n_interruptions, double t_save_s,
                 double t_restore_s, double t_off_avg_s);

}  // namespace ibsim

#endif  // IBSIM_CONTROLLER_HPP
