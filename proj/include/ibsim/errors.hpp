#ifndef IBSIM_ERRORS_HPP
#define IBSIM_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ibsim {

// Base class for every error raised by the simulator library.
struct sim_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- trace ingestion ---

struct malformed_line : sim_error {
  size_t line_no;
  std::string content;
  malformed_line(size_t line, const std::string& text)
      : sim_error("malformed trace line " + std::to_string(line) + ": '" + text + "'"),
        line_no(line), content(text) {}
};

struct non_monotonic_cycle : sim_error {
  size_t line_no;
  non_monotonic_cycle(size_t line, uint64_t prev, uint64_t cur)
      : sim_error("cycle regression at trace line " + std::to_string(line) + ": " +
                  std::to_string(cur) + " after " + std::to_string(prev)),
        line_no(line) {}
};

struct misaligned_address : sim_error {
  size_t line_no;
  uint64_t addr;
  misaligned_address(size_t line, uint64_t a)
      : sim_error("address is not 32-bit word aligned at trace line " + std::to_string(line)),
        line_no(line), addr(a) {}
};

struct trace_io_error : sim_error {
  using sim_error::sim_error;
};

// --- scheduling ---

struct schedule_too_short : sim_error {
  uint64_t cycle;
  explicit schedule_too_short(uint64_t c)
      : sim_error("schedule ends before cycle " + std::to_string(c)), cycle(c) {}
};

struct invalid_interval_length : sim_error {
  invalid_interval_length() : sim_error("interval length must be at least one cycle") {}
};

struct invalid_probability : sim_error {
  explicit invalid_probability(double p)
      : sim_error("failure probability must lie strictly between 0 and 1, got " +
                  std::to_string(p)) {}
};

// --- strategies / controller ---

struct invalid_block_size : sim_error {
  explicit invalid_block_size(uint64_t n)
      : sim_error("block size must be a power of two in [1, 1024] words, got " +
                  std::to_string(n)) {}
};

struct mem_too_small : sim_error {
  mem_too_small(uint64_t mem_words, uint64_t needed)
      : sim_error("memory of " + std::to_string(mem_words) +
                  " words cannot hold a trace footprint of " + std::to_string(needed) +
                  " words") {}
};

// --- cache / energy ---

struct invalid_cache_config : sim_error {
  using sim_error::sim_error;
};

struct missing_params : sim_error {
  using sim_error::sim_error;
};

struct division_by_zero_overhead : sim_error {
  division_by_zero_overhead() : sim_error("overhead power must be positive") {}
};

struct zero_total : sim_error {
  zero_total() : sim_error("cannot decompose a zero total energy") {}
};

// --- experiment orchestration ---

struct config_error : sim_error {
  using sim_error::sim_error;
};

}  // namespace ibsim

#endif  // IBSIM_ERRORS_HPP
