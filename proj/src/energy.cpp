#include "ibsim/energy.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ibsim/errors.hpp"

namespace ibsim {

mem_tech tech_from_id(const std::string& id) {
  if (id == "sram") return mem_tech::sram;
  if (id == "stt") return mem_tech::stt;
  if (id == "rram") return mem_tech::rram;
  throw config_error("unknown memory technology: " + id);
}

const char* tech_id(mem_tech t) {
  switch (t) {
    case mem_tech::sram: return "sram";
    case mem_tech::stt: return "stt";
    case mem_tech::rram: return "rram";
  }
  return "?";
}

param_registry param_registry::builtin() {
  param_registry r;
  // 32 nm array figures, pJ per 32-bit word.
  r.set_mem(mem_tech::sram, 4, {0.219, 0.111});
  r.set_mem(mem_tech::sram, 16, {0.703, 0.215});
  r.set_mem(mem_tech::sram, 32, {1.664, 1.175});
  r.set_mem(mem_tech::sram, 64, {2.500, 1.388});
  r.set_mem(mem_tech::stt, 4, {7.754, 20.244});
  r.set_mem(mem_tech::stt, 16, {7.889, 20.614});
  r.set_mem(mem_tech::stt, 32, {8.426, 20.873});
  r.set_mem(mem_tech::stt, 64, {8.692, 21.416});
  r.set_mem(mem_tech::rram, 4, {5.101, 21.349});
  r.set_mem(mem_tech::rram, 16, {5.477, 27.449});
  r.set_mem(mem_tech::rram, 32, {6.004, 24.176});
  r.set_mem(mem_tech::rram, 64, {6.667, 28.575});
  r.set_sram_leakage(4, 0.78);
  r.set_sram_leakage(16, 2.16);
  r.set_sram_leakage(32, 3.58);
  r.set_sram_leakage(64, 7.16);
  // Cache arrays, pJ per access; miss detection costs the same as a hit.
  r.set_cache(2, {5.43, 4.50});
  r.set_cache(4, {6.15, 4.96});
  r.set_cache(8, {10.13, 9.42});
  r.set_cache(16, {13.45, 12.74});
  return r;
}

mem_energy param_registry::mem(mem_tech t, int size_kb) const {
  auto it = mem_.find({static_cast<int>(t), size_kb});
  if (it == mem_.end())
    throw missing_params(std::string("no parameters for ") + tech_id(t) + " at " +
                         std::to_string(size_kb) + " KB");
  return it->second;
}

double param_registry::sram_leakage_uw(int size_kb) const {
  auto it = sram_leak_uw_.find(size_kb);
  if (it == sram_leak_uw_.end())
    throw missing_params("no SRAM leakage figure for " + std::to_string(size_kb) + " KB");
  return it->second;
}

param_registry::cache_access param_registry::cache(int size_kb) const {
  auto it = cache_.find(size_kb);
  if (it == cache_.end())
    throw missing_params("no cache parameters for " + std::to_string(size_kb) + " KB");
  return it->second;
}

bool param_registry::has_mem(mem_tech t, int size_kb) const {
  return mem_.count({static_cast<int>(t), size_kb}) > 0;
}

std::vector<int> param_registry::mem_sizes_kb(mem_tech t) const {
  std::vector<int> sizes;
  for (const auto& [key, val] : mem_)
    if (key.first == static_cast<int>(t)) sizes.push_back(key.second);
  return sizes;
}

void param_registry::set_mem(mem_tech t, int size_kb, mem_energy e) {
  mem_[{static_cast<int>(t), size_kb}] = e;
}

void param_registry::set_sram_leakage(int size_kb, double uw) {
  sram_leak_uw_[size_kb] = uw;
}

void param_registry::set_cache(int size_kb, cache_access e) { cache_[size_kb] = e; }

namespace {

bool parse_double(const std::string& s, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void param_registry::load(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = line;
    size_t hash = s.find('#');
    if (hash != std::string::npos) s.resize(hash);
    s = trim(s);
    if (s.empty()) continue;

    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw config_error("registry line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val_s = trim(s.substr(eq + 1));
    double val;
    if (!parse_double(val_s, val))
      throw config_error("registry line " + std::to_string(line_no) + ": bad number '" +
                         val_s + "'");

    std::vector<std::string> parts;
    std::stringstream ks(key);
    std::string part;
    while (std::getline(ks, part, '.')) parts.push_back(part);

    auto bad_key = [&]() -> config_error {
      return config_error("registry line " + std::to_string(line_no) + ": unknown key '" +
                          key + "'");
    };

    if (parts.size() == 2) {
      if (parts[0] == "ctrl" && parts[1] == "active") ctrl_active_uw = val;
      else if (parts[0] == "ctrl" && parts[1] == "leakage") ctrl_leak_uw = val;
      else if (parts[0] == "flagmem" && parts[1] == "leakage") flag_mem_leak_uw = val;
      else if (parts[0] == "clock" && parts[1] == "leakage_hz") leak_clock_hz = val;
      else if (parts[0] == "nvm" && parts[1] == "leakage") nvm_leak_uw = val;
      else throw bad_key();
      continue;
    }
    if (parts.size() != 3) throw bad_key();

    int size_kb;
    auto [p, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), size_kb);
    if (ec != std::errc() || p != parts[1].data() + parts[1].size()) throw bad_key();

    if (parts[0] == "cache") {
      cache_access c = cache_.count(size_kb) ? cache_.at(size_kb) : cache_access{};
      if (parts[2] == "hit") c.hit_pj = val;
      else if (parts[2] == "write") c.write_pj = val;
      else throw bad_key();
      cache_[size_kb] = c;
      continue;
    }

    mem_tech t;
    try {
      t = tech_from_id(parts[0]);
    } catch (const config_error&) {
      throw bad_key();
    }
    if (parts[2] == "leakage") {
      if (t != mem_tech::sram) throw bad_key();
      sram_leak_uw_[size_kb] = val;
      continue;
    }
    auto key_pair = std::make_pair(static_cast<int>(t), size_kb);
    mem_energy e = mem_.count(key_pair) ? mem_.at(key_pair) : mem_energy{};
    if (parts[2] == "read") e.read_pj = val;
    else if (parts[2] == "write") e.write_pj = val;
    else throw bad_key();
    mem_[key_pair] = e;
  }
}

void param_registry::save(std::ostream& out) const {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  out << "# memory access energies, pJ per 32-bit word; leakage in uW\n";
  for (const auto& [key, e] : mem_) {
    const char* t = tech_id(static_cast<mem_tech>(key.first));
    out << t << '.' << key.second << ".read = " << num(e.read_pj) << '\n';
    out << t << '.' << key.second << ".write = " << num(e.write_pj) << '\n';
  }
  for (const auto& [kb, uw] : sram_leak_uw_)
    out << "sram." << kb << ".leakage = " << num(uw) << '\n';
  for (const auto& [kb, c] : cache_) {
    out << "cache." << kb << ".hit = " << num(c.hit_pj) << '\n';
    out << "cache." << kb << ".write = " << num(c.write_pj) << '\n';
  }
  out << "ctrl.active = " << num(ctrl_active_uw) << '\n';
  out << "ctrl.leakage = " << num(ctrl_leak_uw) << '\n';
  out << "flagmem.leakage = " << num(flag_mem_leak_uw) << '\n';
  out << "clock.leakage_hz = " << num(leak_clock_hz) << '\n';
  out << "nvm.leakage = " << num(nvm_leak_uw) << '\n';
}

void param_registry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open parameter file: " + path);
  load(in);
}

void param_registry::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw config_error("cannot create parameter file: " + path);
  save(out);
}

energy_breakdown energy_sram_nvm(uint64_t n_load, uint64_t n_store,
                                 uint64_t n_saved_words, uint64_t n_restored_words,
                                 const mem_energy& sram, const mem_energy& nvm) {
  energy_breakdown e;
  e.e_prog_loads_pj = static_cast<double>(n_load) * sram.read_pj;
  e.e_prog_stores_pj = static_cast<double>(n_store) * sram.write_pj;
  e.e_backup_pj = static_cast<double>(n_saved_words) * (sram.read_pj + nvm.write_pj);
  e.e_restore_pj = static_cast<double>(n_restored_words) * (nvm.read_pj + sram.write_pj);
  return e;
}

double energy_nvm_only(uint64_t n_load, uint64_t n_store, const mem_energy& nvm) {
  return static_cast<double>(n_load) * nvm.read_pj +
         static_cast<double>(n_store) * nvm.write_pj;
}

double cycle_energy(double e_save_j, double n_saved_words, double e_restore_j,
                    double n_restored_words, double p_on_w, double t_active_s,
                    double p_off_w, double t_off_s, double p_ovh_w) {
  return e_save_j * n_saved_words + e_restore_j * n_restored_words +
         (p_on_w + p_ovh_w) * t_active_s + p_off_w * t_off_s;
}

double p_overhead(double store_cycle_fraction, double p_active_w, double p_leak_w) {
  return store_cycle_fraction * p_active_w + p_leak_w;
}

double t_on_bound(double delta, double e_save_per_word_j, double n_total_words,
                  double p_ovh_w) {
  if (!(p_ovh_w > 0.0)) throw division_by_zero_overhead();
  if (delta < 0.0 || delta > 1.0)
    throw std::invalid_argument("delta must lie in [0, 1]");
  return delta * e_save_per_word_j * n_total_words / p_ovh_w;
}

double leakage_energy(int mem_size_kb, uint64_t duration_cycles, double clock_hz,
                      const param_registry& reg) {
  if (!(clock_hz > 0.0)) throw std::invalid_argument("clock must be positive");
  double seconds = static_cast<double>(duration_cycles) / clock_hz;
  return reg.sram_leakage_uw(mem_size_kb) * 1e-6 * seconds;
}

decomposition decomposition_percentages(const energy_breakdown& e) {
  double total = e.total_pj();
  if (total == 0.0) throw zero_total();
  decomposition d;
  d.loads_pct = 100.0 * e.e_prog_loads_pj / total;
  d.stores_pct = 100.0 * e.e_prog_stores_pj / total;
  d.backup_pct = 100.0 * e.e_backup_pj / total;
  d.restore_pct = 100.0 * e.e_restore_pj / total;
  return d;
}

}  // namespace ibsim
