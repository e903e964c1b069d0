#ifndef IBSIM_TESTS_CACHE_REFERENCE_HPP
#define IBSIM_TESTS_CACHE_REFERENCE_HPP

#include <vector>

#include "ibsim/cachesim.hpp"

namespace ibsim::testutil {

// Independent re-implementation of the cache model for cross-checking: keeps
// per-set line lists with access timestamps instead of move-to-front arrays.
inline cache_stats reference_cache(const trace& t, const failure_schedule& s,
                                   const cache_config& cfg) {
  struct line {
    uint64_t tag = 0;
    bool valid = false;
    bool dirty = false;
    uint64_t used = 0;
  };
  const uint32_t sets = cfg.n_sets();
  std::vector<std::vector<line>> c(sets, std::vector<line>(cfg.ways));
  cache_stats st;
  uint64_t clock = 0;

  auto access = [&](uint32_t addr, bool wr) {
    ++clock;
    uint64_t la = addr / 32;
    auto& set = c[la % sets];
    uint64_t tag = la / sets;
    for (auto& l : set)
      if (l.valid && l.tag == tag) {
        wr ? ++st.n_hit_w : ++st.n_hit_r;
        if (wr) l.dirty = true;
        l.used = clock;
        return;
      }
    ++st.n_miss;
    line* victim = nullptr;
    for (auto& l : set)
      if (!l.valid) {
        victim = &l;
        break;
      }
    if (!victim) {
      victim = &set[0];
      for (auto& l : set)
        if (l.used < victim->used) victim = &l;
    }
    if (victim->valid && victim->dirty) st.n_evict_words += 8;
    *victim = {tag, true, wr, clock};
  };

  auto flush = [&] {
    for (auto& set : c)
      for (auto& l : set) {
        st.n_lines_scanned += 1;
        if (l.valid && l.dirty) ++st.n_flush_lines;
        l = {};
      }
  };

  size_t k = 0;
  for (size_t i = 0; i < s.n_intervals(); ++i) {
    for (; k < t.events.size() && t.events[k].cycle < s.boundaries[i]; ++k)
      access(t.events[k].addr, t.events[k].kind == mem_op::store);
    if (i + 1 < s.n_intervals()) flush();
  }
  return st;
}

inline bool same_cache_stats(const cache_stats& a, const cache_stats& b) {
  return a.n_hit_r == b.n_hit_r && a.n_hit_w == b.n_hit_w && a.n_miss == b.n_miss &&
         a.n_evict_words == b.n_evict_words && a.n_flush_lines == b.n_flush_lines &&
         a.n_lines_scanned == b.n_lines_scanned;
}

}  // namespace ibsim::testutil

#endif  // IBSIM_TESTS_CACHE_REFERENCE_HPP
