#ifndef IBSIM_STRATEGIES_HPP
#define IBSIM_STRATEGIES_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ibsim/trace.hpp"

namespace ibsim {

// Words written to NVM at the end of each interval, per interval. Strategies
// that cannot know the future (everything except the oracle pair) also report
// a would-be size for the final interval even though the program completes
// there without a failure; aggregation can exclude that entry.
struct backup_report {
  std::string strategy_id;
  uint32_t block_size_words = 1;
  std::vector<uint64_t> per_interval_words;

  uint64_t total_words() const;
  double mean_words() const;
  double mean_words_excluding_last() const;

  // CSV with header: interval,strategy,block_size,words_saved
  void write_csv(std::ostream& out) const;
};

// Sorted, duplicate-free word indices (byte address >> 2).
using word_set = std::vector<uint32_t>;

enum class strategy_kind : uint8_t { full, ua, ma, mb, oracle, om };

strategy_kind strategy_from_id(const std::string& id);
const char* strategy_id(strategy_kind k);

// Whole data section, paged: the contiguous byte span from the lowest to the
// highest accessed address, rounded up to 512-byte pages, saved at every
// boundary regardless of activity.
backup_report full_memory_backup(const footprint& fp, const failure_schedule& s);

// Distinct words accessed (loads and stores) during each interval.
backup_report used_address(const trace& t, const failure_schedule& s);

// Distinct words stored during each interval. A store counts even when it
// rewrites the value already in memory; values are not inspected.
backup_report modified_address(const trace& t, const failure_schedule& s);

// Block-granular write tracking: block index = word index / block size, and
// every word of a touched block is saved. block_size_words must be a power of
// two in [1, 1024]; with block size 1 this degenerates to modified_address.
backup_report modified_block(const trace& t, const failure_schedule& s,
                             uint32_t block_size_words);

// Clairvoyant minimum of useful state: a word is alive at a boundary when its
// next access on or after that boundary is a load. Nothing is alive at the
// end of the last interval.
backup_report oracle(const trace& t, const failure_schedule& s);

// Alive words restricted to those written during the interval: the true lower
// bound for any scheme that only tracks stores.
backup_report oracle_modified(const trace& t, const failure_schedule& s);

// Alive word sets behind the two oracle strategies, one per interval.
std::vector<word_set> alive_word_sets(const trace& t, const failure_schedule& s);

struct aliveness_profile {
  std::vector<uint64_t> alive_words;
  std::vector<uint64_t> alive_modified_words;
  std::vector<double> frac_alive;           // relative to footprint.distinct_words
  std::vector<double> frac_alive_modified;
};

aliveness_profile compute_aliveness_profile(const trace& t, const failure_schedule& s);

// Exact per-interval word sets a strategy commits to NVM. Feeds the replay
// checker and the controller equivalence tests.
std::vector<word_set> saved_word_sets(const trace& t, const failure_schedule& s,
                                      strategy_kind kind, uint32_t block_size_words = 1);

struct counterexample {
  size_t interval;  // interval whose load observed stale data
  uint32_t addr;    // byte address of that word
};

// Replays the trace against a backup policy given as per-interval saved sets.
// At every interior boundary the saved words are committed to NVM, then
// volatile memory is wiped and refilled from the NVM image. Returns the first
// load that observes a value different from uninterrupted execution, or
// nullopt when the policy is sufficient.
std::optional<counterexample> verify_sufficiency(const trace& t, const failure_schedule& s,
                                                 const std::vector<word_set>& saved);

// Flag bits needed to track mem_words of memory at the given block size:
// one bit per block, ceil(mem_words / block_size_words).
uint64_t dirty_bits_required(uint64_t mem_words, uint32_t block_size_words);

// One dirty flag per block of block_size_words words.
class dirty_bit_map {
 public:
  dirty_bit_map(uint64_t mem_words, uint32_t block_size_words);

  // Marks the block containing the given word (relative to the mapped base).
  void mark_word(uint64_t word_index);
  bool test(uint64_t block_index) const { return bits_[block_index]; }
  void clear();

  uint32_t block_size_words() const { return block_words_; }
  uint64_t n_blocks() const { return bits_.size(); }
  uint64_t set_count() const { return set_count_; }

 private:
  uint32_t block_words_;
  uint32_t block_shift_;
  std::vector<bool> bits_;
  uint64_t set_count_ = 0;
};

}  // namespace ibsim

#endif  // IBSIM_STRATEGIES_HPP
