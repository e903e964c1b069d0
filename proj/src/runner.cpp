#include "ibsim/runner.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ibsim/cachesim.hpp"
#include "ibsim/errors.hpp"

namespace ibsim {

namespace {

// ---------------------------------------------------------------- formatting

// All emitted floats carry six significant digits so reruns are byte-stable.
std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::string(buf);
}

double round6(double v) { return std::strtod(fmt6(v).c_str(), nullptr); }

// ------------------------------------------------------------ config parsing

std::vector<std::string> tokenize(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

uint64_t parse_u64_or_throw(const std::string& s, const std::string& what) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw config_error("bad integer for " + what + ": '" + s + "'");
  return v;
}

double parse_double_or_throw(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw config_error("bad number for " + what + ": '" + s + "'");
  }
}

locality locality_from_id(const std::string& id) {
  if (id == "sequential") return locality::sequential;
  if (id == "uniform") return locality::uniform;
  if (id == "looped") return locality::looped;
  throw config_error("unknown locality: " + id);
}

std::string basename_no_ext(const std::string& path) {
  std::filesystem::path p(path);
  std::string stem = p.stem().string();
  if (p.extension() == ".gz") stem = std::filesystem::path(stem).stem().string();
  return stem.empty() ? path : stem;
}

void apply_trace_option(trace_source& ts, const std::string& key, const std::string& val) {
  if (key == "name") ts.name = val;
  else if (key == "mem_words") ts.mem_words = parse_u64_or_throw(val, "mem_words");
  else if (key == "param_kb") ts.param_kb = static_cast<int>(parse_u64_or_throw(val, "param_kb"));
  else if (key == "events") ts.profile.n_events = parse_u64_or_throw(val, "events");
  else if (key == "range") ts.profile.addr_range_words =
      static_cast<uint32_t>(parse_u64_or_throw(val, "range"));
  else if (key == "stores") ts.profile.store_fraction = parse_double_or_throw(val, "stores");
  else if (key == "locality") ts.profile.pattern = locality_from_id(val);
  else if (key == "seed") ts.seed = parse_u64_or_throw(val, "seed");
  else throw config_error("unknown trace option: " + key);
}

std::vector<strategy_sel> expand_strategies(const std::vector<std::string>& ids,
                                            const std::vector<uint32_t>& mb_blocks,
                                            uint32_t tracked_block) {
  std::vector<strategy_sel> out;
  auto add = [&](strategy_kind k, uint32_t b) {
    for (const auto& s : out)
      if (s.kind == k && s.block_size_words == b) return;
    out.push_back({k, b});
  };
  for (const auto& id : ids) {
    if (id.size() > 2 && id.compare(0, 2, "mb") == 0 &&
        id.find_first_not_of("0123456789", 2) == std::string::npos) {
      add(strategy_kind::mb,
          static_cast<uint32_t>(parse_u64_or_throw(id.substr(2), "block size")));
    } else if (id == "mb") {
      if (mb_blocks.empty()) add(strategy_kind::mb, tracked_block);
      for (uint32_t b : mb_blocks) add(strategy_kind::mb, b);
    } else {
      add(strategy_from_id(id), 1);
    }
  }
  return out;
}

}  // namespace

experiment_config parse_config(std::istream& in) {
  experiment_config cfg;
  std::vector<std::string> strategy_ids;
  std::vector<uint32_t> mb_blocks;

  std::string section;
  std::string line;
  size_t line_no = 0;
  size_t synth_count = 0;

  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    std::string s = line.substr(a, b - a + 1);

    if (s.front() == '[') {
      if (s.back() != ']') throw config_error("line " + std::to_string(line_no) +
                                              ": unterminated section header");
      section = s.substr(1, s.size() - 2);
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = s.substr(0, eq);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    std::string value = s.substr(eq + 1);
    size_t va = value.find_first_not_of(" \t");
    value = va == std::string::npos ? "" : value.substr(va);

    auto unknown = [&]() -> config_error {
      return config_error("line " + std::to_string(line_no) + ": unknown key '" + key +
                          "' in section [" + section + "]");
    };

    if (section == "traces") {
      auto toks = tokenize(value);
      if (key == "file") {
        if (toks.empty()) throw config_error("line " + std::to_string(line_no) +
                                             ": file entry needs a path");
        trace_source ts;
        ts.path = toks[0];
        ts.name = basename_no_ext(toks[0]);
        for (size_t i = 1; i < toks.size(); ++i) {
          size_t e = toks[i].find('=');
          if (e == std::string::npos) throw config_error("line " + std::to_string(line_no) +
                                                         ": expected key=value options");
          apply_trace_option(ts, toks[i].substr(0, e), toks[i].substr(e + 1));
        }
        cfg.traces.push_back(std::move(ts));
      } else if (key == "synthetic") {
        trace_source ts;
        ts.synthetic = true;
        ts.name = "synth" + std::to_string(++synth_count);
        for (const auto& tok : toks) {
          size_t e = tok.find('=');
          if (e == std::string::npos) throw config_error("line " + std::to_string(line_no) +
                                                         ": expected key=value options");
          apply_trace_option(ts, tok.substr(0, e), tok.substr(e + 1));
        }
        if (ts.profile.n_events == 0)
          throw config_error("line " + std::to_string(line_no) +
                             ": synthetic trace needs events=<n>");
        cfg.traces.push_back(std::move(ts));
      } else {
        throw unknown();
      }
    } else if (section == "schedule") {
      if (key == "nprog") {
        for (const auto& t : tokenize(value))
          cfg.nprog_list.push_back(parse_u64_or_throw(t, "nprog"));
      } else if (key == "failure_prob") {
        for (const auto& t : tokenize(value))
          cfg.failure_probs.push_back(parse_double_or_throw(t, "failure_prob"));
      } else if (key == "seeds") {
        cfg.n_seeds = static_cast<uint32_t>(parse_u64_or_throw(value, "seeds"));
      } else if (key == "seed0") {
        cfg.seed0 = parse_u64_or_throw(value, "seed0");
      } else {
        throw unknown();
      }
    } else if (section == "strategies") {
      if (key == "use") {
        for (const auto& t : tokenize(value)) strategy_ids.push_back(t);
      } else if (key == "mb_blocks") {
        for (const auto& t : tokenize(value))
          mb_blocks.push_back(static_cast<uint32_t>(parse_u64_or_throw(t, "mb_blocks")));
      } else {
        throw unknown();
      }
    } else if (section == "architectures") {
      if (key == "use") {
        for (const auto& t : tokenize(value)) cfg.architectures.push_back(t);
      } else if (key == "tracked_block") {
        cfg.tracked_block_words =
            static_cast<uint32_t>(parse_u64_or_throw(value, "tracked_block"));
      } else {
        throw unknown();
      }
    } else if (section == "energy") {
      if (key == "tech") cfg.tech = tech_from_id(value);
      else if (key == "params") cfg.param_file = value;
      else if (key == "nvm_leakage_uw")
        cfg.nvm_leak_uw = parse_double_or_throw(value, "nvm_leakage_uw");
      else throw unknown();
    } else if (section == "timing") {
      if (key == "cpu_mhz") cfg.cpu_mhz = parse_double_or_throw(value, "cpu_mhz");
      else if (key == "nvm_ns") cfg.nvm_ns = parse_double_or_throw(value, "nvm_ns");
      else if (key == "k_sw") cfg.k_sw = parse_double_or_throw(value, "k_sw");
      else if (key == "t_off") {
        if (value != "auto") cfg.t_off_s = parse_double_or_throw(value, "t_off");
      } else throw unknown();
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = value;
      else if (key == "exclude_last_interval") {
        if (value == "true") cfg.exclude_last_interval = true;
        else if (value == "false") cfg.exclude_last_interval = false;
        else throw config_error("line " + std::to_string(line_no) +
                                ": exclude_last_interval must be true or false");
      } else throw unknown();
    } else {
      throw config_error("line " + std::to_string(line_no) + ": key '" + key +
                         "' outside any known section");
    }
  }

  if (strategy_ids.empty())
    strategy_ids = {"full", "ua", "ma", "mb", "oracle", "om"};
  cfg.strategies = expand_strategies(strategy_ids, mb_blocks, cfg.tracked_block_words);
  if (cfg.architectures.empty())
    cfg.architectures = {"sram+nvm:tracked", "sram+nvm:fullmem"};
  return cfg;
}

experiment_config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  return parse_config(in);
}

namespace {

// ------------------------------------------------------------ orchestration

struct loaded_trace {
  trace_source src;
  trace data;
  footprint fp;
  uint64_t mem_words = 0;
  int param_kb = 0;
};

struct schedule_instance {
  std::string label;
  double failure_prob = 0;  // 0 for fixed schedules
  uint64_t seed = 0;
  failure_schedule sched;
};

uint64_t pick_mem_words(const footprint& fp, uint32_t max_block) {
  if (fp.span_words == 0) return 1024;
  uint32_t min_word = fp.min_addr >> 2;
  uint64_t shift = min_word % max_block;
  uint64_t needed = std::max<uint64_t>(fp.span_words + shift, 1024);
  return std::bit_ceil(needed);
}

int pick_param_kb(const param_registry& reg, mem_tech tech, uint64_t mem_words) {
  std::vector<int> sram_sizes = reg.mem_sizes_kb(mem_tech::sram);
  std::vector<int> nvm_sizes = reg.mem_sizes_kb(tech);
  std::vector<int> sizes;
  std::set_intersection(sram_sizes.begin(), sram_sizes.end(), nvm_sizes.begin(),
                        nvm_sizes.end(), std::back_inserter(sizes));
  for (int kb : sizes)
    if (static_cast<uint64_t>(kb) * 256 >= mem_words) return kb;
  throw config_error("memory of " + std::to_string(mem_words) +
                     " words exceeds every size in the parameter table; set param_kb");
}

uint32_t max_block_in_use(const experiment_config& cfg) {
  uint32_t m = std::max<uint32_t>(1, cfg.tracked_block_words);
  for (const auto& s : cfg.strategies)
    if (s.kind == strategy_kind::mb) m = std::max(m, s.block_size_words);
  return m;
}

std::string schedule_label_fixed(uint64_t nprog) {
  return "nprog=" + std::to_string(nprog);
}

std::string schedule_label_random(double p, uint64_t seed) {
  return "p=" + fmt6(p) + ",seed=" + std::to_string(seed);
}

struct strategy_outputs {
  strategy_sel sel;
  backup_report report;
};

double mean_of(const backup_report& r, bool exclude_last) {
  return exclude_last ? r.mean_words_excluding_last() : r.mean_words();
}

double safe_ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 1.0 : 0.0;
  return num / den;
}

struct arch_energy {
  std::string name;
  energy_breakdown breakdown;              // sram+nvm architectures
  std::optional<cache_energy_breakdown> cache;  // cache architectures
  double total_pj = 0;
  double exec_time_s = 0;
  double leakage_uj = 0;
};

}  // namespace

run_result run_experiment(const experiment_config& cfg) {
  if (cfg.traces.empty()) throw config_error("no traces configured");
  if (cfg.nprog_list.empty() && cfg.failure_probs.empty())
    throw config_error("no schedules configured: set nprog or failure_prob");
  if (!cfg.failure_probs.empty() && cfg.n_seeds == 0)
    throw config_error("seeds must be at least 1");
  if (cfg.tech == mem_tech::sram)
    throw config_error("the checkpoint memory must be a non-volatile technology");
  if (cfg.cpu_mhz <= 0 || cfg.nvm_ns <= 0 || cfg.k_sw <= 0)
    throw config_error("timing parameters must be positive");

  param_registry reg = param_registry::builtin();
  if (!cfg.param_file.empty()) reg.load_file(cfg.param_file);
  if (cfg.nvm_leak_uw) reg.nvm_leak_uw = *cfg.nvm_leak_uw;

  const double nvm_s = cfg.nvm_ns * 1e-9;
  const double cpu_hz = cfg.cpu_mhz * 1e6;
  const uint32_t max_block = max_block_in_use(cfg);

  // The tracked and full-memory cells are needed as baselines even when not
  // selected for output.
  std::vector<strategy_sel> wanted = cfg.strategies;
  auto ensure = [&](strategy_kind k, uint32_t b) {
    for (const auto& s : wanted)
      if (s.kind == k && s.block_size_words == b) return;
    wanted.push_back({k, b});
  };
  ensure(strategy_kind::full, 1);
  ensure(strategy_kind::mb, cfg.tracked_block_words);

  std::vector<loaded_trace> traces;
  for (const auto& src : cfg.traces) {
    loaded_trace lt;
    lt.src = src;
    lt.data = src.synthetic ? gen_synthetic_trace(src.profile, src.seed)
                            : load_trace(src.path);
    lt.fp = compute_footprint(lt.data);
    lt.mem_words = src.mem_words ? src.mem_words : pick_mem_words(lt.fp, max_block);
    lt.param_kb = src.param_kb ? src.param_kb : pick_param_kb(reg, cfg.tech, lt.mem_words);
    traces.push_back(std::move(lt));
  }

  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream sizes_csv(std::filesystem::path(cfg.out_dir) / "backup_sizes.csv");
  std::ofstream timing_csv(std::filesystem::path(cfg.out_dir) / "timing.csv");
  std::ofstream energy_csv(std::filesystem::path(cfg.out_dir) / "energy.csv");
  if (!sizes_csv || !timing_csv || !energy_csv)
    throw config_error("cannot create output files under " + cfg.out_dir);
  sizes_csv << "trace,schedule,interval,strategy,block_size,words_saved\n";
  timing_csv << "trace,schedule,interval,strategy,backup_s,restore_s\n";
  energy_csv << "trace,schedule,architecture,component,energy_pj\n";

  run_result result;
  // (trace, prob, strategy, block) -> reductions per seed, in seed order
  std::map<std::tuple<std::string, double, std::string, uint32_t>, std::vector<double>>
      seed_reductions;

  for (const auto& lt : traces) {
    std::vector<schedule_instance> schedules;
    for (uint64_t np : cfg.nprog_list)
      schedules.push_back({schedule_label_fixed(np), 0, 0,
                           fixed_schedule(lt.data.last_cycle(), np)});
    for (double p : cfg.failure_probs)
      for (uint32_t k = 0; k < cfg.n_seeds; ++k) {
        uint64_t seed = cfg.seed0 + k;
        schedules.push_back({schedule_label_random(p, seed), p, seed,
                             random_schedule(lt.data.last_cycle(), p, seed)});
      }

    const mem_energy sramp = reg.mem(mem_tech::sram, lt.param_kb);
    const mem_energy nvmp = reg.mem(cfg.tech, lt.param_kb);

    for (const auto& si : schedules) {
      const auto& sched = si.sched;
      const uint64_t n_i = sched.n_interruptions();
      const size_t n_intervals = sched.n_intervals();

      std::vector<strategy_outputs> outs;
      for (const auto& sel : wanted) {
        backup_report r;
        switch (sel.kind) {
          case strategy_kind::full: r = full_memory_backup(lt.fp, sched); break;
          case strategy_kind::ua: r = used_address(lt.data, sched); break;
          case strategy_kind::ma: r = modified_address(lt.data, sched); break;
          case strategy_kind::mb: {
            auto cr = run_controller(lt.data, sched, sel.block_size_words, lt.mem_words);
            r.strategy_id = "mb";
            r.block_size_words = sel.block_size_words;
            r.per_interval_words = std::move(cr.words_saved);
            break;
          }
          case strategy_kind::oracle: r = oracle(lt.data, sched); break;
          case strategy_kind::om: r = oracle_modified(lt.data, sched); break;
        }
        outs.push_back({sel, std::move(r)});
      }

      auto find_out = [&](strategy_kind k, uint32_t b) -> const backup_report& {
        for (const auto& o : outs)
          if (o.sel.kind == k && o.sel.block_size_words == b) return o.report;
        throw std::logic_error("strategy cell missing");
      };
      const backup_report& full_r = find_out(strategy_kind::full, 1);
      const backup_report& tracked_r = find_out(strategy_kind::mb, cfg.tracked_block_words);

      const double full_mean = mean_of(full_r, cfg.exclude_last_interval);
      const double t_prog = static_cast<double>(lt.data.last_cycle()) / cpu_hz;
      const double t_off =
          cfg.t_off_s ? *cfg.t_off_s
                      : t_prog / static_cast<double>(std::max<size_t>(n_intervals, 1));

      auto strategy_times = [&](const backup_report& r) {
        // Software checkpointing runs the copy loop on the core; the block
        // tracker and the oracles stream words from dedicated hardware.
        double mult = r.strategy_id == "full" ? cfg.k_sw : 1.0;
        double save_sum = 0;
        for (uint64_t i = 0; i < n_i; ++i)
          save_sum += static_cast<double>(r.per_interval_words[i]) * nvm_s * mult;
        double save_mean = n_i ? save_sum / static_cast<double>(n_i) : 0.0;
        double restore = static_cast<double>(lt.mem_words) * nvm_s * mult;
        return std::tuple{save_sum, save_mean, restore};
      };

      auto [full_save_sum, full_save_mean, full_restore] = strategy_times(full_r);
      const double full_exec = exec_time(t_prog, n_i, full_save_mean, full_restore, t_off);

      // Per-strategy rows, in config order.
      for (const auto& sel : cfg.strategies) {
        const backup_report& r = find_out(sel.kind, sel.block_size_words);
        auto [save_sum, save_mean, restore] = strategy_times(r);
        double mean = mean_of(r, cfg.exclude_last_interval);
        double texec = exec_time(t_prog, n_i, save_mean, restore, t_off);

        run_summary rs;
        rs.trace = lt.src.name;
        rs.schedule = si.label;
        rs.strategy = r.strategy_id;
        rs.block_size = r.block_size_words;
        rs.n_intervals = n_intervals;
        rs.total_words = r.total_words();
        rs.mean_words = mean;
        rs.norm_vs_fullmem = safe_ratio(mean, full_mean);
        rs.norm_vs_footprint = safe_ratio(mean, static_cast<double>(lt.fp.distinct_words));
        rs.reduction_pct = 100.0 * (1.0 - safe_ratio(mean, full_mean));
        rs.backup_time_s = save_sum;
        rs.exec_time_s = texec;
        rs.exec_reduction_pct = 100.0 * (1.0 - safe_ratio(texec, full_exec));
        result.runs.push_back(rs);

        if (si.failure_prob > 0)
          seed_reductions[{lt.src.name, si.failure_prob, r.strategy_id, r.block_size_words}]
              .push_back(rs.reduction_pct);

        for (size_t i = 0; i < r.per_interval_words.size(); ++i) {
          sizes_csv << lt.src.name << ',' << si.label << ',' << i << ',' << r.strategy_id
                    << ',' << r.block_size_words << ',' << r.per_interval_words[i] << '\n';
          double mult = r.strategy_id == "full" ? cfg.k_sw : 1.0;
          double bs = static_cast<double>(r.per_interval_words[i]) * nvm_s * mult;
          double rs_s = i == 0 ? 0.0 : static_cast<double>(lt.mem_words) * nvm_s * mult;
          timing_csv << lt.src.name << ',' << si.label << ',' << i << ',' << r.strategy_id
                     << ',' << fmt6(bs) << ',' << fmt6(rs_s) << '\n';
        }
      }

      // Architecture energies. The tracked cell is the ratio reference.
      const uint64_t n_restored = lt.mem_words * n_i;
      auto interrupted_words = [&](const backup_report& r) {
        uint64_t sum = 0;
        for (uint64_t i = 0; i < n_i; ++i) sum += r.per_interval_words[i];
        return sum;
      };

      auto eval_arch = [&](const std::string& name) -> arch_energy {
        arch_energy ae;
        ae.name = name;
        if (name == "sram+nvm:tracked" || name == "sram+nvm:fullmem") {
          const backup_report& r = name == "sram+nvm:tracked" ? tracked_r : full_r;
          ae.breakdown = energy_sram_nvm(lt.fp.n_load, lt.fp.n_store, interrupted_words(r),
                                         n_restored, sramp, nvmp);
          ae.total_pj = ae.breakdown.total_pj();
          auto [ss, sm, rst] = strategy_times(r);
          ae.exec_time_s = exec_time(t_prog, n_i, sm, rst, t_off);
          ae.leakage_uj =
              leakage_energy(lt.param_kb, lt.data.last_cycle(), reg.leak_clock_hz, reg) * 1e6;
        } else if (name == "nvm-only") {
          ae.total_pj = energy_nvm_only(lt.fp.n_load, lt.fp.n_store, nvmp);
          double t_prog_nvm = static_cast<double>(lt.data.last_cycle()) * nvm_s;
          ae.exec_time_s = exec_time(t_prog_nvm, n_i, 0.0, 0.0, t_off);
          ae.leakage_uj = reg.nvm_leak_uw * 1e-6 *
                          (static_cast<double>(lt.data.last_cycle()) / reg.leak_clock_hz) * 1e6;
        } else if (name.rfind("cache+nvm:", 0) == 0) {
          int kb = static_cast<int>(parse_u64_or_throw(name.substr(10), "cache size"));
          cache_config cc;
          cc.size_bytes = static_cast<uint32_t>(kb) * 1024;
          cache_stats st = simulate_cache(lt.data, sched, cc);
          auto cp = reg.cache(kb);
          cache_cost_params costs;
          costs.e_hit_pj = cp.hit_pj;
          costs.e_miss_pj = cp.hit_pj;
          costs.e_cache_w_pj = cp.write_pj;
          costs.e_nvm_r_pj = nvmp.read_pj;
          costs.e_nvm_w_pj = nvmp.write_pj;
          costs.cache_lines = cc.n_lines();
          ae.cache = cache_energy(st, costs, n_i);
          ae.total_pj = ae.cache->total_pj();
        } else {
          throw config_error("unknown architecture: " + name);
        }
        return ae;
      };

      arch_energy tracked_arch = eval_arch("sram+nvm:tracked");
      arch_energy full_arch = eval_arch("sram+nvm:fullmem");

      for (const auto& name : cfg.architectures) {
        arch_energy ae;
        if (name == "sram+nvm:tracked") ae = tracked_arch;
        else if (name == "sram+nvm:fullmem") ae = full_arch;
        else ae = eval_arch(name);

        energy_summary es;
        es.trace = lt.src.name;
        es.schedule = si.label;
        es.architecture = name;
        es.total_pj = ae.total_pj;
        es.ratio_vs_tracked = safe_ratio(ae.total_pj, tracked_arch.total_pj);
        es.leakage_uj = ae.leakage_uj;
        result.energies.push_back(es);

        auto row = [&](const char* comp, double pj) {
          energy_csv << lt.src.name << ',' << si.label << ',' << name << ',' << comp << ','
                     << fmt6(pj) << '\n';
        };
        if (ae.cache) {
          row("hits", ae.cache->hits_pj);
          row("misses", ae.cache->misses_pj);
          row("flushes", ae.cache->flushes_pj);
        } else if (name == "nvm-only") {
          row("prog_loads", static_cast<double>(lt.fp.n_load) * nvmp.read_pj);
          row("prog_stores", static_cast<double>(lt.fp.n_store) * nvmp.write_pj);
        } else {
          row("prog_loads", ae.breakdown.e_prog_loads_pj);
          row("prog_stores", ae.breakdown.e_prog_stores_pj);
          row("backup", ae.breakdown.e_backup_pj);
          row("restore", ae.breakdown.e_restore_pj);
        }
        row("total", ae.total_pj);
      }
    }
  }

  // Seed statistics: mean and sample standard deviation of the reduction.
  for (const auto& [key, vals] : seed_reductions) {
    seed_aggregate sa;
    sa.trace = std::get<0>(key);
    sa.failure_prob = std::get<1>(key);
    sa.strategy = std::get<2>(key);
    sa.block_size = std::get<3>(key);
    sa.n_seeds = static_cast<uint32_t>(vals.size());
    double mean = 0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    sa.mean_reduction_pct = mean;
    sa.std_reduction_pct =
        vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
    result.seed_aggregates.push_back(sa);
  }

  // summary.json
  nlohmann::ordered_json j;
  j["tech"] = tech_id(cfg.tech);
  j["timing"] = {
      {"cpu_mhz", round6(cfg.cpu_mhz)},
      {"nvm_ns", round6(cfg.nvm_ns)},
      {"sw_checkpoint_multiplier", round6(cfg.k_sw)},
      {"sw_checkpoint_multiplier_calibrated", true},
      {"t_off_s", cfg.t_off_s ? nlohmann::ordered_json(round6(*cfg.t_off_s))
                              : nlohmann::ordered_json("auto")},
  };
  j["exclude_last_interval"] = cfg.exclude_last_interval;

  auto& jr = j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : result.runs) {
    jr.push_back({{"trace", r.trace},
                  {"schedule", r.schedule},
                  {"strategy", r.strategy},
                  {"block_size", r.block_size},
                  {"n_intervals", r.n_intervals},
                  {"total_words", r.total_words},
                  {"mean_words", round6(r.mean_words)},
                  {"norm_vs_fullmem", round6(r.norm_vs_fullmem)},
                  {"norm_vs_footprint", round6(r.norm_vs_footprint)},
                  {"reduction_pct", round6(r.reduction_pct)},
                  {"backup_time_s", round6(r.backup_time_s)},
                  {"exec_time_s", round6(r.exec_time_s)},
                  {"exec_reduction_pct", round6(r.exec_reduction_pct)}});
  }

  auto& js = j["seed_aggregates"] = nlohmann::ordered_json::array();
  for (const auto& s : result.seed_aggregates) {
    js.push_back({{"trace", s.trace},
                  {"failure_prob", round6(s.failure_prob)},
                  {"strategy", s.strategy},
                  {"block_size", s.block_size},
                  {"n_seeds", s.n_seeds},
                  {"mean_reduction_pct", round6(s.mean_reduction_pct)},
                  {"std_reduction_pct", round6(s.std_reduction_pct)}});
  }

  auto& je = j["energy"] = nlohmann::ordered_json::array();
  for (const auto& e : result.energies) {
    je.push_back({{"trace", e.trace},
                  {"schedule", e.schedule},
                  {"architecture", e.architecture},
                  {"total_pj", round6(e.total_pj)},
                  {"ratio_vs_tracked", round6(e.ratio_vs_tracked)},
                  {"leakage_uj", round6(e.leakage_uj)}});
  }

  // Per-length averages across traces, for interval sweeps.
  if (cfg.nprog_list.size() > 1) {
    auto& ja = j["nprog_averages"] = nlohmann::ordered_json::array();
    for (uint64_t np : cfg.nprog_list) {
      std::string label = schedule_label_fixed(np);
      for (const auto& sel : cfg.strategies) {
        double sum = 0;
        size_t count = 0;
        for (const auto& r : result.runs)
          if (r.schedule == label && r.strategy == strategy_id(sel.kind) &&
              r.block_size == (sel.kind == strategy_kind::mb ? sel.block_size_words : 1)) {
            sum += r.reduction_pct;
            ++count;
          }
        if (count)
          ja.push_back({{"nprog", np},
                        {"strategy", strategy_id(sel.kind)},
                        {"block_size", sel.kind == strategy_kind::mb ? sel.block_size_words : 1},
                        {"avg_reduction_pct", round6(sum / static_cast<double>(count))}});
      }
    }
  }

  std::ofstream summary(std::filesystem::path(cfg.out_dir) / "summary.json");
  if (!summary) throw config_error("cannot create summary.json under " + cfg.out_dir);
  summary << j.dump(2) << '\n';
  return result;
}

run_result sweep_interval_lengths(experiment_config cfg, std::vector<uint64_t> nprogs) {
  if (nprogs.empty()) throw config_error("sweep needs at least one interval length");
  cfg.nprog_list = std::move(nprogs);
  return run_experiment(cfg);
}

run_result compare_architectures(const experiment_config& cfg) {
  experiment_config c = cfg;
  if (c.architectures.empty() ||
      (c.architectures.size() == 2 && c.architectures[0] == "sram+nvm:tracked" &&
       c.architectures[1] == "sram+nvm:fullmem")) {
    c.architectures = {"sram+nvm:tracked", "sram+nvm:fullmem", "nvm-only",
                       "cache+nvm:2", "cache+nvm:4", "cache+nvm:8", "cache+nvm:16"};
  }
  return run_experiment(c);
}

}  // namespace ibsim
