#include "ibsim/cachesim.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "ibsim/errors.hpp"

namespace ibsim {

void cache_config::validate() const {
  if (ways != 4 || line_words != 8)
    throw invalid_cache_config("cache geometry is fixed at 4 ways of 8-word lines");
  if (size_bytes != 2048 && size_bytes != 4096 && size_bytes != 8192 && size_bytes != 16384)
    throw invalid_cache_config("cache size must be 2, 4, 8 or 16 KB, got " +
                               std::to_string(size_bytes) + " bytes");
}

std::string cache_stats::to_json() const {
  nlohmann::ordered_json j;
  j["n_hit_r"] = n_hit_r;
  j["n_hit_w"] = n_hit_w;
  j["n_miss"] = n_miss;
  j["n_evict_words"] = n_evict_words;
  j["n_flush_lines"] = n_flush_lines;
  j["n_lines_scanned"] = n_lines_scanned;
  return j.dump();
}

void cache_stats::write_csv(std::ostream& out) const {
  out << "n_hit_r,n_hit_w,n_miss,n_evict_words,n_flush_lines,n_lines_scanned\n"
      << n_hit_r << ',' << n_hit_w << ',' << n_miss << ',' << n_evict_words << ','
      << n_flush_lines << ',' << n_lines_scanned << '\n';
}

namespace {

struct cache_line {
  uint64_t tag = 0;
  bool valid = false;
  bool dirty = false;
};

class sa_cache {
 public:
  sa_cache(const cache_config& cfg)
      : sets_(cfg.n_sets()), ways_(cfg.ways), lines_(cfg.n_lines()),
        order_(cfg.n_lines()) {
    for (uint32_t s = 0; s < sets_; ++s)
      for (uint32_t w = 0; w < ways_; ++w) order_[s * ways_ + w] = static_cast<uint8_t>(w);
  }

  void access(uint32_t addr, bool is_write, cache_stats& st) {
    uint64_t line_addr = addr >> 5;  // 32-byte lines
    uint32_t set = static_cast<uint32_t>(line_addr % sets_);
    uint64_t tag = line_addr / sets_;
    cache_line* base = &lines_[set * ways_];
    uint8_t* order = &order_[set * ways_];  // order[0] is the most recent way

    for (uint32_t w = 0; w < ways_; ++w) {
      if (base[w].valid && base[w].tag == tag) {
        if (is_write) {
          ++st.n_hit_w;
          base[w].dirty = true;
        } else {
          ++st.n_hit_r;
        }
        touch(order, w);
        return;
      }
    }

    ++st.n_miss;
    uint32_t victim = ways_;
    for (uint32_t w = 0; w < ways_; ++w)
      if (!base[w].valid) {
        victim = w;
        break;
      }
    if (victim == ways_) victim = order[ways_ - 1];
    if (base[victim].valid && base[victim].dirty) st.n_evict_words += 8;
    base[victim] = {tag, true, is_write};  // line fill; a write dirties it
    touch(order, victim);
  }

  void fail(cache_stats& st) {
    st.n_lines_scanned += lines_.size();
    for (auto& l : lines_) {
      if (l.valid && l.dirty) ++st.n_flush_lines;
      l = {};
    }
  }

 private:
  void touch(uint8_t* order, uint32_t way) {
    uint32_t i = 0;
    while (order[i] != way) ++i;
    for (; i > 0; --i) order[i] = order[i - 1];
    order[0] = static_cast<uint8_t>(way);
  }

  uint32_t sets_;
  uint32_t ways_;
  std::vector<cache_line> lines_;
  std::vector<uint8_t> order_;
};

}  // namespace

cache_stats simulate_cache(const trace& t, const failure_schedule& s,
                           const cache_config& cfg) {
  cfg.validate();
  sa_cache cache(cfg);
  cache_stats st;

  size_t k = 0;
  const size_t n = s.n_intervals();
  for (size_t i = 0; i < n; ++i) {
    uint64_t bound = s.boundaries[i];
    for (; k < t.events.size() && t.events[k].cycle < bound; ++k)
      cache.access(t.events[k].addr, t.events[k].kind == mem_op::store, st);
    if (i + 1 < n) cache.fail(st);
  }
  if (k < t.events.size()) throw schedule_too_short(t.events[k].cycle);
  return st;
}

cache_energy_breakdown cache_energy(const cache_stats& st, const cache_cost_params& p,
                                    uint64_t n_failures) {
  if (p.e_hit_pj < 0 || p.e_miss_pj < 0 || p.e_cache_w_pj < 0 || p.e_nvm_r_pj < 0 ||
      p.e_nvm_w_pj < 0)
    throw missing_params("cache energy parameters must be non-negative");
  if (n_failures > 0 && p.cache_lines == 0)
    throw missing_params("cache_lines is required once failures occurred");

  cache_energy_breakdown e;
  double nh_r = static_cast<double>(st.n_hit_r);
  double nh_w = static_cast<double>(st.n_hit_w);
  e.hits_pj = nh_r * p.e_hit_pj + nh_w * (p.e_hit_pj + p.e_cache_w_pj);
  e.misses_pj = static_cast<double>(st.n_miss) *
                    (p.e_miss_pj + (p.e_nvm_r_pj + p.e_cache_w_pj) * 8.0) +
                static_cast<double>(st.n_evict_words) * p.e_nvm_w_pj;
  e.flushes_pj = static_cast<double>(n_failures) * static_cast<double>(p.cache_lines) *
                     p.e_hit_pj +
                 static_cast<double>(st.n_flush_lines) * p.e_nvm_w_pj * 8.0;
  return e;
}

}  // namespace ibsim
