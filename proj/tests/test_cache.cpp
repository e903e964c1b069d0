#include <map>
#include <vector>

#include "doctest.h"

#include "ibsim/cachesim.hpp"
#include "ibsim/errors.hpp"
#include "cache_reference.hpp"
#include "helpers.hpp"

using namespace ibsim;
using testutil::reference_cache;
using testutil::same_cache_stats;

TEST_CASE("cache geometry") {
  cache_config cfg;
  CHECK(cfg.line_bytes() == 32);
  CHECK(cfg.n_sets() == 32);   // 4096 / (4 * 32)
  CHECK(cfg.n_lines() == 128);
  CHECK_NOTHROW(cfg.validate());

  cache_config bad = cfg;
  bad.size_bytes = 1024;
  CHECK_THROWS_AS(bad.validate(), invalid_cache_config);
  bad = cfg;
  bad.ways = 2;
  CHECK_THROWS_AS(bad.validate(), invalid_cache_config);
  bad = cfg;
  bad.line_words = 4;
  CHECK_THROWS_AS(bad.validate(), invalid_cache_config);
}

TEST_CASE("simulator agrees with the timestamp reference") {
  for (uint64_t seed = 1; seed <= 12; ++seed) {
    trace t = testutil::make_random_trace(seed, 1500, 4096, 0.4,
                                          seed % 2 ? locality::uniform : locality::looped);
    auto s = testutil::make_random_schedule(t, seed);
    for (uint32_t kb : {2u, 4u, 8u, 16u}) {
      cache_config cfg;
      cfg.size_bytes = kb * 1024;
      INFO("seed ", seed, " size ", kb, " KB");
      CHECK(same_cache_stats(simulate_cache(t, s, cfg), reference_cache(t, s, cfg)));
    }
  }
}

TEST_CASE("conflict misses evict the least recently used line") {
  // five tags aimed at one set of a 2 KB cache (16 sets): the fifth install
  // evicts the oldest, so revisiting it misses again
  cache_config cfg;
  cfg.size_bytes = 2048;
  trace t;
  uint64_t cycle = 0;
  for (uint32_t k = 0; k < 5; ++k)
    t.events.push_back({++cycle, (k * 16u) << 5, mem_op::load});
  t.events.push_back({++cycle, 0u << 5, mem_op::load});  // the evicted tag
  failure_schedule s;
  s.boundaries = {100};
  auto st = simulate_cache(t, s, cfg);
  CHECK(st.n_miss == 6);
  CHECK(st.n_hit_r == 0);
  CHECK(st.n_evict_words == 0);  // clean evictions move no words

  // same pattern with stores pays 8 words per eviction
  for (auto& e : t.events) e.kind = mem_op::store;
  auto stw = simulate_cache(t, s, cfg);
  CHECK(stw.n_miss == 6);
  CHECK(stw.n_evict_words == 16);  // two dirty victims
}

TEST_CASE("reads without failures never touch NVM") {
  trace t = testutil::make_random_trace(5, 2000, 64, 0.0);  // 8 lines of footprint
  failure_schedule s;
  s.boundaries = {t.last_cycle() + 1};
  cache_config cfg;
  auto st = simulate_cache(t, s, cfg);
  CHECK(st.n_evict_words == 0);
  CHECK(st.n_flush_lines == 0);
  CHECK(st.n_lines_scanned == 0);
  CHECK(st.n_hit_w == 0);
  // footprint fits: only compulsory misses
  std::map<uint32_t, bool> lines;
  for (const auto& e : t.events) lines[e.addr / 32] = true;
  CHECK(st.n_miss == lines.size());
  CHECK(st.n_hit_r == t.events.size() - lines.size());
}

TEST_CASE("every failure scans the whole cache") {
  trace t = testutil::make_random_trace(6, 1000, 512, 0.5);
  for (uint64_t nprog : {400u, 1000u, 3000u}) {
    auto s = fixed_schedule(t.last_cycle(), nprog);
    cache_config cfg;
    auto st = simulate_cache(t, s, cfg);
    CHECK(st.n_lines_scanned ==
          static_cast<uint64_t>(s.n_interruptions()) * cfg.n_lines());
  }
}

TEST_CASE("failures in an idle tail scan but flush nothing new") {
  trace t = testutil::make_random_trace(7, 500, 256, 0.5);
  uint64_t last = t.last_cycle();
  // both schedules flush at last+1, after which the cache stays empty; the
  // longer one adds two failures that find nothing dirty
  failure_schedule base;
  base.boundaries = {last / 2, last + 1, last + 50};
  failure_schedule tail;
  tail.boundaries = {last / 2, last + 1, last + 50, last + 100, last + 150};

  cache_config cfg;
  auto a = simulate_cache(t, base, cfg);
  auto b = simulate_cache(t, tail, cfg);
  CHECK(a.n_miss == b.n_miss);
  CHECK(a.n_evict_words == b.n_evict_words);
  // the extra failures find an empty cache: more scans, same flushed lines
  CHECK(b.n_flush_lines == a.n_flush_lines);
  CHECK(b.n_lines_scanned == a.n_lines_scanned + 2 * cfg.n_lines());
}

TEST_CASE("schedule must cover the cached trace") {
  trace t = testutil::make_random_trace(8, 100, 64);
  failure_schedule s;
  s.boundaries = {t.last_cycle()};  // one cycle short
  CHECK_THROWS_AS(simulate_cache(t, s, cache_config{}), schedule_too_short);
}

TEST_CASE("cache energy terms") {
  cache_cost_params p;
  p.e_hit_pj = 6.15;
  p.e_miss_pj = 6.15;
  p.e_cache_w_pj = 4.96;
  p.e_nvm_r_pj = 10.0;
  p.e_nvm_w_pj = 20.0;
  p.cache_lines = 128;

  // a hundred write hits cost the lookup plus the word write each
  cache_stats wh;
  wh.n_hit_w = 100;
  auto e = cache_energy(wh, p, 0);
  CHECK(e.hits_pj == doctest::Approx(1111.0));
  CHECK(e.misses_pj == 0.0);
  CHECK(e.flushes_pj == 0.0);
  CHECK(e.total_pj() == doctest::Approx(1111.0));

  // a miss pays detection plus an 8-word line fill; dirty evictions and
  // flushed lines pay the NVM write per word
  cache_stats mix;
  mix.n_hit_r = 10;
  mix.n_miss = 3;
  mix.n_evict_words = 8;
  mix.n_flush_lines = 2;
  mix.n_lines_scanned = 256;
  auto em = cache_energy(mix, p, 2);
  CHECK(em.hits_pj == doctest::Approx(10 * 6.15));
  CHECK(em.misses_pj == doctest::Approx(3 * (6.15 + (10.0 + 4.96) * 8) + 8 * 20.0));
  CHECK(em.flushes_pj == doctest::Approx(2 * 128 * 6.15 + 2 * 20.0 * 8));

  CHECK_THROWS_AS(cache_energy(mix, cache_cost_params{}, 2), missing_params);
  cache_cost_params neg = p;
  neg.e_hit_pj = -1;
  CHECK_THROWS_AS(cache_energy(mix, neg, 0), missing_params);
}

TEST_CASE("larger caches never hit less on a reuse-heavy trace") {
  trace t = testutil::make_random_trace(9, 3000, 2048, 0.3, locality::looped);
  auto s = fixed_schedule(t.last_cycle(), t.last_cycle() + 1);
  uint64_t prev_hits = 0;
  for (uint32_t kb : {2u, 4u, 8u, 16u}) {
    cache_config cfg;
    cfg.size_bytes = kb * 1024;
    auto st = simulate_cache(t, s, cfg);
    uint64_t hits = st.n_hit_r + st.n_hit_w;
    CHECK(hits >= prev_hits);
    prev_hits = hits;
  }
}
