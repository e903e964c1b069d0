// Command line front end: trace generation, single-trace analysis, and full
// experiment runs driven by a config file.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ibsim/controller.hpp"
#include "ibsim/energy.hpp"
#include "ibsim/errors.hpp"
#include "ibsim/runner.hpp"
#include "ibsim/strategies.hpp"
#include "ibsim/trace.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_data = 3;

ibsim::locality parse_locality(const std::string& id) {
  if (id == "sequential") return ibsim::locality::sequential;
  if (id == "uniform") return ibsim::locality::uniform;
  if (id == "looped") return ibsim::locality::looped;
  throw ibsim::config_error("unknown locality: " + id +
                            " (expected sequential, uniform or looped)");
}

int gen_trace_cmd(uint64_t events, uint32_t range, double stores,
                  const std::string& loc, uint64_t seed, const std::string& out) {
  ibsim::synth_profile p;
  p.n_events = events;
  p.addr_range_words = range;
  p.store_fraction = stores;
  p.pattern = parse_locality(loc);
  ibsim::trace t = ibsim::gen_synthetic_trace(p, seed);
  ibsim::save_trace(t, out);
  ibsim::footprint fp = ibsim::compute_footprint(t);
  std::printf("%s: %zu events, %llu distinct words, last cycle %llu\n", out.c_str(),
              t.events.size(), static_cast<unsigned long long>(fp.distinct_words),
              static_cast<unsigned long long>(t.last_cycle()));
  return exit_ok;
}

int analyze_cmd(const std::string& path, uint64_t nprog, uint32_t mb_block,
                const std::string& csv_path) {
  ibsim::trace t = ibsim::load_trace(path);
  ibsim::footprint fp = ibsim::compute_footprint(t);
  std::printf("trace:          %s\n", path.c_str());
  std::printf("events:         %zu (%llu loads, %llu stores)\n", t.events.size(),
              static_cast<unsigned long long>(fp.n_load),
              static_cast<unsigned long long>(fp.n_store));
  std::printf("last cycle:     %llu\n", static_cast<unsigned long long>(t.last_cycle()));
  std::printf("distinct words: %llu\n", static_cast<unsigned long long>(fp.distinct_words));
  std::printf("address span:   0x%x..0x%x (%llu words)\n", fp.min_addr, fp.max_addr,
              static_cast<unsigned long long>(fp.span_words));
  if (nprog == 0) return exit_ok;

  ibsim::failure_schedule s = ibsim::fixed_schedule(t.last_cycle(), nprog);
  std::printf("schedule:       every %llu cycles, %zu intervals\n",
              static_cast<unsigned long long>(nprog), s.n_intervals());

  std::vector<ibsim::backup_report> reports;
  reports.push_back(ibsim::full_memory_backup(fp, s));
  reports.push_back(ibsim::used_address(t, s));
  reports.push_back(ibsim::modified_address(t, s));
  reports.push_back(ibsim::modified_block(t, s, mb_block));
  reports.push_back(ibsim::oracle(t, s));
  reports.push_back(ibsim::oracle_modified(t, s));

  std::printf("%-8s %-6s %12s %12s %14s\n", "strategy", "block", "total", "mean",
              "vs full-mem");
  const double full_mean = reports.front().mean_words();
  for (const auto& r : reports) {
    double norm = full_mean > 0 ? r.mean_words() / full_mean : 1.0;
    std::printf("%-8s %-6u %12llu %12.1f %13.1f%%\n", r.strategy_id.c_str(),
                r.block_size_words, static_cast<unsigned long long>(r.total_words()),
                r.mean_words(), 100.0 * norm);
  }

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw ibsim::config_error("cannot create " + csv_path);
    out << "interval,strategy,block_size,words_saved\n";
    for (const auto& r : reports)
      for (size_t i = 0; i < r.per_interval_words.size(); ++i)
        out << i << ',' << r.strategy_id << ',' << r.block_size_words << ','
            << r.per_interval_words[i] << '\n';
    std::printf("wrote %s\n", csv_path.c_str());
  }
  return exit_ok;
}

int report_result(const ibsim::run_result& res, const std::string& out_dir) {
  std::printf("wrote %s/{backup_sizes.csv,timing.csv,energy.csv,summary.json}\n",
              out_dir.c_str());
  std::printf("%zu strategy rows, %zu seed aggregates, %zu energy rows\n",
              res.runs.size(), res.seed_aggregates.size(), res.energies.size());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"backup strategy simulator for intermittently powered systems"};
  app.require_subcommand(1);

  // gen-trace
  auto* gen = app.add_subcommand("gen-trace", "generate a synthetic memory trace");
  uint64_t g_events = 0;
  uint32_t g_range = 1024;
  double g_stores = 0.3;
  std::string g_loc = "uniform";
  uint64_t g_seed = 1;
  std::string g_out;
  gen->add_option("--events", g_events, "number of memory accesses")->required();
  gen->add_option("--range", g_range, "address range in words");
  gen->add_option("--stores", g_stores, "store fraction in [0,1]");
  gen->add_option("--locality", g_loc, "sequential, uniform or looped");
  gen->add_option("--seed", g_seed, "generator seed");
  gen->add_option("-o,--out", g_out, "output path (.gz compresses)")->required();

  // analyze
  auto* ana = app.add_subcommand("analyze", "footprint and backup sizes of one trace");
  std::string a_trace;
  uint64_t a_nprog = 0;
  uint32_t a_mb = 8;
  std::string a_csv;
  ana->add_option("trace", a_trace, "trace file")->required();
  ana->add_option("--nprog", a_nprog, "fixed interval length in cycles");
  ana->add_option("--mb", a_mb, "block size in words for the block strategy");
  ana->add_option("--csv", a_csv, "write per-interval sizes to this file");

  // simulate / sweep / compare share a config file
  std::string s_config, s_out;
  auto* sim = app.add_subcommand("simulate", "run the experiment in a config file");
  sim->add_option("--config", s_config, "config file")->required();
  sim->add_option("--out", s_out, "override the output directory");

  std::string w_config, w_out;
  std::vector<uint64_t> w_nprogs;
  auto* swp = app.add_subcommand("sweep", "repeat the experiment across interval lengths");
  swp->add_option("--config", w_config, "config file")->required();
  swp->add_option("--nprog", w_nprogs, "interval lengths in cycles")->required();
  swp->add_option("--out", w_out, "override the output directory");

  std::string c_config, c_out;
  auto* cmp = app.add_subcommand("compare", "energy across memory architectures");
  cmp->add_option("--config", c_config, "config file")->required();
  cmp->add_option("--out", c_out, "override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }

  try {
    if (gen->parsed()) return gen_trace_cmd(g_events, g_range, g_stores, g_loc, g_seed, g_out);
    if (ana->parsed()) return analyze_cmd(a_trace, a_nprog, a_mb, a_csv);
    if (sim->parsed()) {
      ibsim::experiment_config cfg = ibsim::load_config(s_config);
      if (!s_out.empty()) cfg.out_dir = s_out;
      return report_result(ibsim::run_experiment(cfg), cfg.out_dir);
    }
    if (swp->parsed()) {
      ibsim::experiment_config cfg = ibsim::load_config(w_config);
      if (!w_out.empty()) cfg.out_dir = w_out;
      return report_result(ibsim::sweep_interval_lengths(cfg, w_nprogs), cfg.out_dir);
    }
    if (cmp->parsed()) {
      ibsim::experiment_config cfg = ibsim::load_config(c_config);
      if (!c_out.empty()) cfg.out_dir = c_out;
      return report_result(ibsim::compare_architectures(cfg), cfg.out_dir);
    }
  } catch (const ibsim::malformed_line& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data;
  } catch (const ibsim::non_monotonic_cycle& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data;
  } catch (const ibsim::misaligned_address& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data;
  } catch (const ibsim::trace_io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data;
  } catch (const ibsim::schedule_too_short& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_data;
  } catch (const ibsim::sim_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  }
  return exit_ok;
}
