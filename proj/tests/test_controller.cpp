#include "doctest.h"

#include "ibsim/controller.hpp"
#include "ibsim/errors.hpp"
#include "helpers.hpp"

using namespace ibsim;

TEST_CASE("controller tracking matches the block strategy exactly") {
  for (uint64_t seed = 1; seed <= 15; ++seed) {
    trace t = testutil::make_random_trace(seed, 600, 200);
    auto s = testutil::make_random_schedule(t, seed);
    for (uint32_t block : {1u, 8u, 64u}) {
      auto res = run_controller(t, s, block, 2048, true);
      auto mb = modified_block(t, s, block);
      CHECK(res.words_saved == mb.per_interval_words);
      CHECK(res.backup_cycles == mb.per_interval_words);
      CHECK(res.saved_words == saved_word_sets(t, s, strategy_kind::mb, block));
    }
  }
}

TEST_CASE("controller restores the whole memory after each failure") {
  trace t = testutil::make_random_trace(2, 300, 100);
  auto s = testutil::make_random_schedule(t, 2);
  auto res = run_controller(t, s, 8, 1024);
  REQUIRE(res.restore_cycles.size() == s.n_intervals());
  CHECK(res.restore_cycles[0] == 0);  // first interval boots cold
  for (size_t i = 1; i < res.restore_cycles.size(); ++i)
    CHECK(res.restore_cycles[i] == 1024);
}

TEST_CASE("controller block grid is absolute, not footprint relative") {
  // min word 5 does not sit on a block boundary; words 5 and 9 fall into
  // different 8-word blocks even though they are 4 words apart
  trace t;
  t.events = {{1, 5 * 4, mem_op::store}, {2, 9 * 4, mem_op::store}};
  failure_schedule s;
  s.boundaries = {10};
  auto res = run_controller(t, s, 8, 64, true);
  auto mb = modified_block(t, s, 8);
  CHECK(res.words_saved == mb.per_interval_words);
  CHECK(res.words_saved == std::vector<uint64_t>{16});
  CHECK(res.saved_words == saved_word_sets(t, s, strategy_kind::mb, 8));
}

TEST_CASE("controller rejects impossible configurations") {
  trace t = testutil::make_random_trace(3, 200, 256);
  auto s = testutil::make_random_schedule(t, 3);
  CHECK_THROWS_AS(run_controller(t, s, 8, 128), mem_too_small);
  CHECK_THROWS_AS(run_controller(t, s, 3, 4096), invalid_block_size);
  CHECK_THROWS_AS(run_controller(t, s, 0, 4096), invalid_block_size);
  CHECK_NOTHROW(run_controller(t, s, 8, 256));
}

TEST_CASE("controller phases cycle through the power sequence") {
  backup_controller c(64, 8, 0);
  CHECK(c.phase() == ctrl_phase::execute);
  c.observe_store(12);
  CHECK(c.dirty().set_count() == 1);

  word_set saved;
  CHECK(c.backup(&saved) == 8);
  CHECK(saved == word_set{8, 9, 10, 11, 12, 13, 14, 15});
  CHECK(c.phase() == ctrl_phase::off);
  CHECK(c.dirty().set_count() == 0);

  CHECK(c.restore() == 64);
  CHECK(c.phase() == ctrl_phase::execute);

  // nothing marked: empty backup
  CHECK(c.backup(nullptr) == 0);
}

TEST_CASE("copy pipeline timing") {
  timing_params tp;
  CHECK(backup_time(1024, tp) == doctest::Approx(0.128e-3));
  CHECK(restore_time(1024, tp) == doctest::Approx(0.128e-3));
  CHECK(backup_time(0, tp) == 0.0);

  tp.nvm_period_s = 250e-9;
  CHECK(backup_time(1024, tp) == doctest::Approx(0.256e-3));
}

TEST_CASE("parallel-array checkpoint timing is paged") {
  CHECK(nvp_backup_time(4096) == doctest::Approx(1.02e-3));
  CHECK(nvp_backup_time(2048) == doctest::Approx(0.51e-3));
  CHECK(nvp_backup_time(1) == doctest::Approx(0.255e-3));
  CHECK(nvp_backup_time(0) == 0.0);
}

TEST_CASE("wall clock time accumulates per interruption") {
  CHECK(exec_time(1.0, 10, 0.001, 0.001, 0.1) == doctest::Approx(2.02));
  CHECK(exec_time(1.0, 0, 0.5, 0.5, 0.5) == doctest::Approx(1.0));
  // slower per-interruption cost can never shorten the run
  CHECK(exec_time(1.0, 10, 0.002, 0.001, 0.1) > exec_time(1.0, 10, 0.001, 0.001, 0.1));
}

TEST_CASE("running from NVM trades backup cost for slower cycles") {
  // compute-bound: 1e7 cycles, few accesses. At 8 MHz the program alone takes
  // three times the 24 MHz baseline, which no amount of saved backup time can
  // recover -> negative savings.
  const double t_prog_24 = 1e7 / 24e6;
  const double t_prog_nvm = 1e7 * 125e-9;  // one access per NVM period
  const uint64_t n_i = 10;
  const double t_off = 0.01;
  // software checkpointing baseline: 13x copy-loop multiplier on 1024 words
  const double t_save_sw = 1024 * 125e-9 * 13;
  const double t_restore_sw = 1024 * 125e-9 * 13;
  double baseline = exec_time(t_prog_24, n_i, t_save_sw, t_restore_sw, t_off);
  double nvm_only = exec_time(t_prog_nvm, n_i, 0.0, 0.0, t_off);
  CHECK(nvm_only > baseline);
  CHECK(t_prog_nvm == doctest::Approx(3.0 * t_prog_24));
}
