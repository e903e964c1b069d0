#ifndef IBSIM_ENERGY_HPP
#define IBSIM_ENERGY_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ibsim {

enum class mem_tech : uint8_t { sram, stt, rram };

mem_tech tech_from_id(const std::string& id);
const char* tech_id(mem_tech t);

// Per-word access energies, picojoules per 32-bit word.
struct mem_energy {
  double read_pj = 0;
  double write_pj = 0;
};

/**
 * Technology parameter table. Keyed by technology and array size in KB;
 * ships with bundled defaults for SRAM, STT and RRAM arrays of 4/16/32/64 KB,
 * cache arrays of 2/4/8/16 KB and the controller power figures. Loadable and
 * dumpable as text, one `tech.size.metric = value` per line.
 */
class param_registry {
 public:
  struct cache_access {
    double hit_pj = 0;    // also used as the miss detection cost
    double write_pj = 0;  // one word into the cache array
  };

  static param_registry builtin();

  mem_energy mem(mem_tech t, int size_kb) const;   // throws missing_params
  double sram_leakage_uw(int size_kb) const;       // throws missing_params
  cache_access cache(int size_kb) const;           // throws missing_params
  bool has_mem(mem_tech t, int size_kb) const;
  std::vector<int> mem_sizes_kb(mem_tech t) const;

  void set_mem(mem_tech t, int size_kb, mem_energy e);
  void set_sram_leakage(int size_kb, double uw);
  void set_cache(int size_kb, cache_access e);

  void load(std::istream& in);  // throws config_error on unknown keys
  void save(std::ostream& out) const;
  void load_file(const std::string& path);
  void save_file(const std::string& path) const;

  // Controller and clock scalars.
  double ctrl_active_uw = 6.8;    // controller logic while the core runs
  double ctrl_leak_uw = 0.04;     // controller leakage
  double flag_mem_leak_uw = 0.6;  // register-file dirty map, 1024 flags
  double leak_clock_hz = 20e6;    // clock used to convert cycles to seconds
  double nvm_leak_uw = 0.0;       // non-volatile arrays idle at zero by default

 private:
  std::map<std::pair<int, int>, mem_energy> mem_;  // (tech, size_kb)
  std::map<int, double> sram_leak_uw_;
  std::map<int, cache_access> cache_;
};

// Dynamic energy split of a run, picojoules.
struct energy_breakdown {
  double e_prog_loads_pj = 0;
  double e_prog_stores_pj = 0;
  double e_backup_pj = 0;
  double e_restore_pj = 0;
  double total_pj() const {
    return e_prog_loads_pj + e_prog_stores_pj + e_backup_pj + e_restore_pj;
  }
};

// SRAM main memory with NVM checkpoints. Every saved word is one SRAM read
// plus one NVM write; every restored word one NVM read plus one SRAM write.
energy_breakdown energy_sram_nvm(uint64_t n_load, uint64_t n_store,
                                 uint64_t n_saved_words, uint64_t n_restored_words,
                                 const mem_energy& sram, const mem_energy& nvm);

// Running straight out of NVM: no checkpoints, every access pays NVM prices.
double energy_nvm_only(uint64_t n_load, uint64_t n_store, const mem_energy& nvm);

// Energy of one power interval. Save and restore words priced at e_save_j and
// e_restore_j each, plus active power (including tracking overhead) over the
// active time and off power over the off time. Joules, watts, seconds.
double cycle_energy(double e_save_j, double n_saved_words, double e_restore_j,
                    double n_restored_words, double p_on_w, double t_active_s,
                    double p_off_w, double t_off_s, double p_ovh_w);

// Tracking overhead power: the controller is busy only on store cycles.
double p_overhead(double store_cycle_fraction, double p_active_w, double p_leak_w);

// Active time below which tracking beats saving everything every cycle:
// t_on < delta * e_save_per_word * total_tracked_words / p_ovh.
// Throws division_by_zero_overhead unless p_ovh_w > 0.
double t_on_bound(double delta, double e_save_per_word_j, double n_total_words,
                  double p_ovh_w);

// SRAM leakage over a cycle count, joules.
double leakage_energy(int mem_size_kb, uint64_t duration_cycles, double clock_hz,
                      const param_registry& reg);

struct decomposition {
  double loads_pct = 0;
  double stores_pct = 0;
  double backup_pct = 0;
  double restore_pct = 0;
};

// Percentage split of a breakdown; throws zero_total when there is nothing
// to decompose.
decomposition decomposition_percentages(const energy_breakdown& e);

}  // namespace ibsim

#endif  // IBSIM_ENERGY_HPP
