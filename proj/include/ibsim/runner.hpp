#ifndef IBSIM_RUNNER_HPP
#define IBSIM_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ibsim/controller.hpp"
#include "ibsim/energy.hpp"
#include "ibsim/strategies.hpp"
#include "ibsim/trace.hpp"

namespace ibsim {

struct trace_source {
  std::string name;
  std::string path;           // empty for synthetic sources
  bool synthetic = false;
  synth_profile profile;
  uint64_t seed = 1;
  uint64_t mem_words = 0;     // 0 selects the smallest power of two that fits
  int param_kb = 0;           // 0 selects the smallest table size that fits
};

struct strategy_sel {
  strategy_kind kind = strategy_kind::mb;
  uint32_t block_size_words = 1;
};

/**
 * One experiment: traces x schedules x strategies x architectures. Parsed
 * from a sectioned key-value file; see the config reference in the README.
 */
struct experiment_config {
  std::vector<trace_source> traces;

  std::vector<uint64_t> nprog_list;       // fixed-interval schedules
  std::vector<double> failure_probs;      // random schedules
  uint32_t n_seeds = 1;
  uint64_t seed0 = 1;

  std::vector<strategy_sel> strategies;
  std::vector<std::string> architectures;  // sram+nvm:tracked, sram+nvm:fullmem,
                                           // nvm-only, cache+nvm:<kb>
  uint32_t tracked_block_words = 8;

  mem_tech tech = mem_tech::stt;
  std::string param_file;                  // optional registry override
  std::optional<double> nvm_leak_uw;

  double cpu_mhz = 24.0;
  double nvm_ns = 125.0;
  double k_sw = 13.0;                      // software checkpointing multiplier,
                                           // calibrated rather than measured
  std::optional<double> t_off_s;           // absent: mean active interval time

  std::string out_dir = "out";
  bool exclude_last_interval = false;
};

experiment_config parse_config(std::istream& in);
experiment_config load_config(const std::string& path);

// Aggregates for one (trace, schedule, strategy) cell.
struct run_summary {
  std::string trace;
  std::string schedule;
  std::string strategy;
  uint32_t block_size = 1;
  uint64_t n_intervals = 0;
  uint64_t total_words = 0;
  double mean_words = 0;
  double norm_vs_fullmem = 0;    // mean backup vs the paged full-memory mean
  double norm_vs_footprint = 0;  // mean backup vs distinct words ever touched
  double reduction_pct = 0;      // 100 * (1 - mean / fullmem mean)
  double backup_time_s = 0;      // summed over interruptions
  double exec_time_s = 0;
  double exec_reduction_pct = 0;  // vs software full-memory checkpointing
};

// Backup-size reduction statistics over seeded random schedules.
struct seed_aggregate {
  std::string trace;
  double failure_prob = 0;
  std::string strategy;
  uint32_t block_size = 1;
  uint32_t n_seeds = 0;
  double mean_reduction_pct = 0;
  double std_reduction_pct = 0;
};

// Total dynamic energy of one architecture on one (trace, schedule) cell.
struct energy_summary {
  std::string trace;
  std::string schedule;
  std::string architecture;
  double total_pj = 0;
  double ratio_vs_tracked = 0;
  double leakage_uj = 0;  // informational, not part of the ratio
};

struct run_result {
  std::vector<run_summary> runs;
  std::vector<seed_aggregate> seed_aggregates;
  std::vector<energy_summary> energies;
};

// Executes the experiment and writes backup_sizes.csv, timing.csv, energy.csv
// and summary.json into cfg.out_dir. Reruns are byte-identical. Throws
// config_error for an unusable config and trace_io_error for unreadable
// traces.
run_result run_experiment(const experiment_config& cfg);

// run_experiment restricted to the tracked strategy against the full-memory
// baseline across interval lengths; nprogs overrides cfg.nprog_list.
run_result sweep_interval_lengths(experiment_config cfg, std::vector<uint64_t> nprogs);

// run_experiment focused on architecture energy ratios.
run_result compare_architectures(const experiment_config& cfg);

}  // namespace ibsim

#endif  // IBSIM_RUNNER_HPP
