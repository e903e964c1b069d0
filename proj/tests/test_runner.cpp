#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "ibsim/errors.hpp"
#include "ibsim/runner.hpp"

using namespace ibsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

experiment_config parse_str(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

fs::path fresh_dir(const char* name) {
  fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

const char* small_cfg = R"(
# two synthetic workloads, fixed and random schedules
[traces]
synthetic = name=loop events=2500 range=512 stores=0.35 locality=looped seed=5
synthetic = name=uni events=1500 range=2048 stores=0.25 locality=uniform seed=6

[schedule]
nprog = 800 3000
failure_prob = 2e-4
seeds = 3
seed0 = 21

[strategies]
use = full ua ma mb oracle om
mb_blocks = 8

[architectures]
use = sram+nvm:tracked sram+nvm:fullmem nvm-only cache+nvm:4
tracked_block = 8

[energy]
tech = stt
)";

}  // namespace

TEST_CASE("config parser reads every section") {
  auto cfg = parse_str(
      "[traces]\n"
      "file = /data/run1.txt.gz name=bench mem_words=4096 param_kb=16\n"
      "synthetic = events=100 range=64 stores=0.5 locality=sequential seed=9\n"
      "[schedule]\n"
      "nprog = 1000, 2000\n"
      "failure_prob = 1e-6 1e-7\n"
      "seeds = 4\n"
      "seed0 = 7\n"
      "[strategies]\n"
      "use = ma mb64 mb\n"
      "mb_blocks = 2 8\n"
      "[architectures]\n"
      "use = sram+nvm:tracked nvm-only\n"
      "tracked_block = 16\n"
      "[energy]\n"
      "tech = rram\n"
      "nvm_leakage_uw = 0.5\n"
      "[timing]\n"
      "cpu_mhz = 8\n"
      "nvm_ns = 250\n"
      "k_sw = 10\n"
      "t_off = 0.25\n"
      "[output]\n"
      "dir = results\n"
      "exclude_last_interval = true\n");

  REQUIRE(cfg.traces.size() == 2);
  CHECK(cfg.traces[0].name == "bench");
  CHECK(cfg.traces[0].path == "/data/run1.txt.gz");
  CHECK_FALSE(cfg.traces[0].synthetic);
  CHECK(cfg.traces[0].mem_words == 4096);
  CHECK(cfg.traces[0].param_kb == 16);
  CHECK(cfg.traces[1].synthetic);
  CHECK(cfg.traces[1].name == "synth1");
  CHECK(cfg.traces[1].profile.n_events == 100);
  CHECK(cfg.traces[1].profile.pattern == locality::sequential);
  CHECK(cfg.traces[1].seed == 9);

  CHECK(cfg.nprog_list == std::vector<uint64_t>{1000, 2000});
  CHECK(cfg.failure_probs == std::vector<double>{1e-6, 1e-7});
  CHECK(cfg.n_seeds == 4);
  CHECK(cfg.seed0 == 7);

  // ma, then mb64, then mb expands over mb_blocks without duplicates
  REQUIRE(cfg.strategies.size() == 4);
  CHECK(cfg.strategies[0].kind == strategy_kind::ma);
  CHECK(cfg.strategies[1].kind == strategy_kind::mb);
  CHECK(cfg.strategies[1].block_size_words == 64);
  CHECK(cfg.strategies[2].block_size_words == 2);
  CHECK(cfg.strategies[3].block_size_words == 8);

  CHECK(cfg.architectures == std::vector<std::string>{"sram+nvm:tracked", "nvm-only"});
  CHECK(cfg.tracked_block_words == 16);
  CHECK(cfg.tech == mem_tech::rram);
  CHECK(cfg.nvm_leak_uw == doctest::Approx(0.5));
  CHECK(cfg.cpu_mhz == doctest::Approx(8));
  CHECK(cfg.nvm_ns == doctest::Approx(250));
  CHECK(cfg.k_sw == doctest::Approx(10));
  REQUIRE(cfg.t_off_s.has_value());
  CHECK(*cfg.t_off_s == doctest::Approx(0.25));
  CHECK(cfg.out_dir == "results");
  CHECK(cfg.exclude_last_interval);
}

TEST_CASE("config parser defaults") {
  auto cfg = parse_str(
      "[traces]\n"
      "synthetic = events=10\n"
      "[schedule]\n"
      "nprog = 100\n");
  CHECK(cfg.strategies.size() == 6);  // full ua ma mb oracle om
  CHECK(cfg.strategies[3].kind == strategy_kind::mb);
  CHECK(cfg.strategies[3].block_size_words == 8);  // tracked default
  CHECK(cfg.architectures ==
        std::vector<std::string>{"sram+nvm:tracked", "sram+nvm:fullmem"});
  CHECK(cfg.tech == mem_tech::stt);
  CHECK_FALSE(cfg.t_off_s.has_value());
}

TEST_CASE("config parser rejects malformed input") {
  CHECK_THROWS_AS(parse_str("[traces]\nbogus = 1\n"), config_error);
  CHECK_THROWS_AS(parse_str("[nosuch]\nx = 1\n"), config_error);
  CHECK_THROWS_AS(parse_str("x = 1\n"), config_error);
  CHECK_THROWS_AS(parse_str("[traces]\nsynthetic = range=64\n"), config_error);
  CHECK_THROWS_AS(parse_str("[schedule]\nnprog = ten\n"), config_error);
  CHECK_THROWS_AS(parse_str("[traces]\nfile =\n"), config_error);
  CHECK_THROWS_AS(parse_str("[output]\nexclude_last_interval = maybe\n"), config_error);
  CHECK_THROWS_AS(parse_str("[traces"), config_error);
  CHECK_THROWS_AS(load_config("/nonexistent/ibsim.cfg"), config_error);
}

TEST_CASE("experiment validation") {
  experiment_config none;
  CHECK_THROWS_AS(run_experiment(none), config_error);

  auto cfg = parse_str("[traces]\nsynthetic = events=10\n");
  CHECK_THROWS_AS(run_experiment(cfg), config_error);  // no schedules

  auto cfg2 = parse_str(
      "[traces]\nsynthetic = events=10\n[schedule]\nnprog = 10\n[energy]\ntech = sram\n");
  CHECK_THROWS_AS(run_experiment(cfg2), config_error);
}

TEST_CASE("experiment artifacts are byte identical across reruns") {
  auto cfg = parse_str(small_cfg);
  auto da = fresh_dir("ibsim_run_a");
  auto db = fresh_dir("ibsim_run_b");

  cfg.out_dir = da.string();
  auto ra = run_experiment(cfg);
  cfg.out_dir = db.string();
  auto rb = run_experiment(cfg);

  for (const char* f :
       {"backup_sizes.csv", "timing.csv", "energy.csv", "summary.json"}) {
    INFO("artifact ", f);
    std::string a = slurp(da / f);
    CHECK(!a.empty());
    CHECK(a == slurp(db / f));
  }
  CHECK(ra.runs.size() == rb.runs.size());
  fs::remove_all(da);
  fs::remove_all(db);
}

TEST_CASE("emitted rows preserve strategy dominance and baselines") {
  auto cfg = parse_str(small_cfg);
  auto dir = fresh_dir("ibsim_run_c");
  cfg.out_dir = dir.string();
  auto res = run_experiment(cfg);

  // 2 traces x (2 fixed + 3 random) x 6 strategies
  CHECK(res.runs.size() == 2 * 5 * 6);

  auto find = [&](const std::string& tr, const std::string& sc, const std::string& st)
      -> const run_summary& {
    for (const auto& r : res.runs)
      if (r.trace == tr && r.schedule == sc && r.strategy == st) return r;
    REQUIRE(false);
    return res.runs.front();
  };

  for (const auto& tr : {"loop", "uni"}) {
    for (const auto& sc : {"nprog=800", "nprog=3000"}) {
      const auto& full = find(tr, sc, "full");
      const auto& ua = find(tr, sc, "ua");
      const auto& ma = find(tr, sc, "ma");
      const auto& mb = find(tr, sc, "mb");
      const auto& om = find(tr, sc, "om");

      CHECK(full.norm_vs_fullmem == doctest::Approx(1.0));
      CHECK(full.reduction_pct == doctest::Approx(0.0));
      CHECK(om.mean_words <= ma.mean_words);
      CHECK(ma.mean_words <= ua.mean_words);
      CHECK(ua.mean_words <= full.mean_words);
      CHECK(ma.mean_words <= mb.mean_words);
      CHECK(mb.reduction_pct > 0.0);
      CHECK(mb.exec_reduction_pct > 0.0);  // hardware copy beats the software loop
      CHECK(mb.norm_vs_fullmem ==
            doctest::Approx(mb.mean_words / full.mean_words));
    }
  }

  // longer intervals accumulate more dirty data: reduction can only drop
  const auto& short_mb = find("loop", "nprog=800", "mb");
  const auto& long_mb = find("loop", "nprog=3000", "mb");
  CHECK(short_mb.reduction_pct >= long_mb.reduction_pct);

  // seed statistics follow the per-seed rows
  REQUIRE(!res.seed_aggregates.empty());
  for (const auto& sa : res.seed_aggregates) {
    CHECK(sa.n_seeds == 3);
    std::vector<double> vals;
    for (const auto& r : res.runs)
      if (r.trace == sa.trace && r.strategy == sa.strategy &&
          r.block_size == sa.block_size && r.schedule.rfind("p=", 0) == 0)
        vals.push_back(r.reduction_pct);
    REQUIRE(vals.size() == 3);
    double mean = (vals[0] + vals[1] + vals[2]) / 3.0;
    CHECK(sa.mean_reduction_pct == doctest::Approx(mean));
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    CHECK(sa.std_reduction_pct == doctest::Approx(std::sqrt(var / 2.0)));
  }
  fs::remove_all(dir);
}

TEST_CASE("architecture comparison ratios") {
  auto cfg = parse_str(small_cfg);
  auto dir = fresh_dir("ibsim_run_d");
  cfg.out_dir = dir.string();
  cfg.architectures.clear();  // let the comparison pick its default set
  auto res = compare_architectures(cfg);

  bool saw_cache = false;
  for (const auto& e : res.energies) {
    if (e.architecture == "sram+nvm:tracked")
      CHECK(e.ratio_vs_tracked == doctest::Approx(1.0));
    if (e.architecture == "sram+nvm:fullmem")
      CHECK(e.ratio_vs_tracked >= 1.0);
    if (e.architecture == "cache+nvm:16") saw_cache = true;
    CHECK(e.total_pj > 0.0);
  }
  CHECK(saw_cache);
  fs::remove_all(dir);
}

TEST_CASE("energy csv is in long component form") {
  auto cfg = parse_str(small_cfg);
  auto dir = fresh_dir("ibsim_run_e");
  cfg.out_dir = dir.string();
  run_experiment(cfg);

  std::istringstream in(slurp(dir / "energy.csv"));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "trace,schedule,architecture,component,energy_pj");
  size_t totals = 0, rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",total,") != std::string::npos) ++totals;
  }
  // 2 traces x 5 schedules x 4 architectures, one total row each
  CHECK(totals == 40);
  CHECK(rows > totals);
  fs::remove_all(dir);
}

TEST_CASE("interval sweep attaches per-length averages") {
  auto cfg = parse_str(
      "[traces]\n"
      "synthetic = name=w events=4000 range=1024 stores=0.3 locality=looped seed=8\n"
      "[schedule]\n"
      "nprog = 500\n"
      "[strategies]\n"
      "use = full mb8\n");
  auto dir = fresh_dir("ibsim_run_f");
  cfg.out_dir = dir.string();
  auto res = sweep_interval_lengths(cfg, {500, 2000, 8000});
  CHECK(res.runs.size() == 3 * 2);

  std::string summary = slurp(dir / "summary.json");
  CHECK(summary.find("nprog_averages") != std::string::npos);
  CHECK_THROWS_AS(sweep_interval_lengths(cfg, {}), config_error);
  fs::remove_all(dir);
}
