#include "ibsim/controller.hpp"

#include <algorithm>
#include <bit>

#include "ibsim/errors.hpp"

namespace ibsim {

backup_controller::backup_controller(uint64_t mem_words, uint32_t block_size_words,
                                     uint32_t base_word)
    : mem_words_(mem_words), base_word_(base_word), dirty_(mem_words, block_size_words) {}

void backup_controller::observe_store(uint32_t word_index) {
  dirty_.mark_word(word_index - base_word_);
}

uint64_t backup_controller::backup(word_set* out) {
  phase_ = ctrl_phase::backup;
  const uint32_t bw = dirty_.block_size_words();
  uint64_t words = 0;
  for (backup_cursor_ = 0; backup_cursor_ < dirty_.n_blocks(); ++backup_cursor_) {
    if (!dirty_.test(backup_cursor_)) continue;
    for (uint32_t w = 0; w < bw; ++w) {
      if (out) out->push_back(base_word_ + static_cast<uint32_t>(backup_cursor_ * bw) + w);
      ++words;
    }
  }
  dirty_.clear();
  phase_ = ctrl_phase::off;
  return words;
}

uint64_t backup_controller::restore() {
  phase_ = ctrl_phase::restore;
  uint64_t cycles = mem_words_;
  phase_ = ctrl_phase::execute;
  return cycles;
}

controller_result run_controller(const trace& t, const failure_schedule& s,
                                 uint32_t block_size_words, uint64_t mem_words,
                                 bool record_sets) {
  if (block_size_words == 0 || block_size_words > 1024 ||
      !std::has_single_bit(block_size_words))
    throw invalid_block_size(block_size_words);

  footprint fp = compute_footprint(t);
  uint32_t base_word = 0;
  if (!t.events.empty()) {
    uint32_t min_word = fp.min_addr >> 2;
    base_word = min_word / block_size_words * block_size_words;
    uint64_t needed = (min_word - base_word) + fp.span_words;
    if (mem_words < needed) throw mem_too_small(mem_words, needed);
  }

  backup_controller ctrl(mem_words, block_size_words, base_word);

  const size_t n = s.n_intervals();
  controller_result res;
  res.words_saved.reserve(n);
  res.backup_cycles.reserve(n);
  res.restore_cycles.reserve(n);
  if (record_sets) res.saved_words.resize(n);

  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    res.restore_cycles.push_back(i == 0 ? 0 : ctrl.restore());
    uint64_t bound = s.boundaries[i];
    for (; k < t.events.size() && t.events[k].cycle < bound; ++k)
      if (t.events[k].kind == mem_op::store) ctrl.observe_store(t.events[k].word());
    // The final boundary is program completion, not a failure; the drain still
    // runs so the report carries the would-be size for the last interval.
    uint64_t words = ctrl.backup(record_sets ? &res.saved_words[i] : nullptr);
    res.words_saved.push_back(words);
    res.backup_cycles.push_back(words);
  }
  if (k < t.events.size()) throw schedule_too_short(t.events[k].cycle);
  return res;
}

double backup_time(uint64_t words, const timing_params& tp) {
  return static_cast<double>(words) * tp.nvm_period_s;
}

double restore_time(uint64_t words, const timing_params& tp) {
  return static_cast<double>(words) * tp.nvm_period_s;
}

double nvp_backup_time(uint64_t used_bytes) {
  uint64_t pages = (used_bytes + 1023) / 1024;
  return static_cast<double>(pages) * (1.02e-3 / 4.0);
}

double exec_time(double t_prog_s, uint64_t n_interruptions, double t_save_s,
                 double t_restore_s, double t_off_avg_s) {
  return t_prog_s +
         static_cast<double>(n_interruptions) * (t_save_s + t_restore_s + t_off_avg_s);
}

}  // namespace ibsim
