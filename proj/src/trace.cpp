#include "ibsim/trace.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <zlib.h>

#include "ibsim/errors.hpp"
#include "ibsim/rng.hpp"

namespace ibsim {

namespace {

bool parse_u64(std::string_view s, uint64_t& out, int base = 10) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_hex_addr(std::string_view s, uint64_t& out) {
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
  if (s.empty()) return false;
  // std::from_chars wants lowercase-agnostic hex anyway; it accepts both cases.
  return parse_u64(s, out, 16);
}

// Splits on spaces and tabs, truncating at a '#' comment.
size_t split_fields(std::string_view line, std::array<std::string_view, 5>& out) {
  size_t n = 0;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
           line[i] != '#')
      ++i;
    if (n < out.size()) out[n] = line.substr(start, i - start);
    ++n;
  }
  return n;
}

struct line_parser {
  trace result;
  uint64_t prev_cycle = 0;
  size_t line_no = 0;

  void feed(std::string_view line) {
    ++line_no;
    std::array<std::string_view, 5> f;
    size_t n = split_fields(line, f);
    if (n == 0) return;
    // Four columns means a leading interval index; it is derivable from the
    // schedule, so it is ignored.
    size_t base = 0;
    if (n == 4) {
      uint64_t ignored;
      if (!parse_u64(f[0], ignored)) throw malformed_line(line_no, std::string(line));
      base = 1;
    } else if (n != 3) {
      throw malformed_line(line_no, std::string(line));
    }

    uint64_t cycle;
    if (!parse_u64(f[base], cycle)) throw malformed_line(line_no, std::string(line));

    mem_op kind;
    if (f[base + 1] == "LD")
      kind = mem_op::load;
    else if (f[base + 1] == "ST")
      kind = mem_op::store;
    else
      throw malformed_line(line_no, std::string(line));

    uint64_t addr;
    if (!parse_hex_addr(f[base + 2], addr) || addr > 0xffffffffull)
      throw malformed_line(line_no, std::string(line));

    if (!result.events.empty() && cycle < prev_cycle)
      throw non_monotonic_cycle(line_no, prev_cycle, cycle);
    if (addr % 4 != 0) throw misaligned_address(line_no, addr);

    result.events.push_back({cycle, static_cast<uint32_t>(addr), kind});
    prev_cycle = cycle;
  }
};

}  // namespace

trace parse_trace(std::istream& in) {
  line_parser p;
  std::string line;
  while (std::getline(in, line)) p.feed(line);
  return std::move(p.result);
}

void serialize_trace(const trace& t, std::ostream& out) {
  char buf[64];
  for (const auto& e : t.events) {
    int n = std::snprintf(buf, sizeof buf, "%llu %s 0x%x\n",
                          static_cast<unsigned long long>(e.cycle),
                          e.kind == mem_op::load ? "LD" : "ST", e.addr);
    out.write(buf, n);
  }
}

namespace {

bool has_gz_suffix(const std::string& path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

trace load_gz(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw trace_io_error("cannot open trace file: " + path);
  line_parser p;
  std::string line;
  char buf[1 << 16];
  try {
    while (gzgets(f, buf, sizeof buf)) {
      line += buf;
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        p.feed(line);
        line.clear();
      }
    }
    int err = 0;
    gzerror(f, &err);
    if (err != Z_OK && err != Z_STREAM_END) {
      gzclose(f);
      throw trace_io_error("error while reading " + path);
    }
    if (!line.empty()) p.feed(line);
  } catch (...) {
    gzclose(f);
    throw;
  }
  gzclose(f);
  return std::move(p.result);
}

}  // namespace

trace load_trace(const std::string& path) {
  if (has_gz_suffix(path)) return load_gz(path);
  std::ifstream in(path);
  if (!in) throw trace_io_error("cannot open trace file: " + path);
  return parse_trace(in);
}

void save_trace(const trace& t, const std::string& path) {
  if (has_gz_suffix(path)) {
    gzFile f = gzopen(path.c_str(), "wb");
    if (!f) throw trace_io_error("cannot create trace file: " + path);
    char buf[64];
    for (const auto& e : t.events) {
      int n = std::snprintf(buf, sizeof buf, "%llu %s 0x%x\n",
                            static_cast<unsigned long long>(e.cycle),
                            e.kind == mem_op::load ? "LD" : "ST", e.addr);
      if (gzwrite(f, buf, static_cast<unsigned>(n)) != n) {
        gzclose(f);
        throw trace_io_error("error while writing " + path);
      }
    }
    gzclose(f);
    return;
  }
  std::ofstream out(path);
  if (!out) throw trace_io_error("cannot create trace file: " + path);
  serialize_trace(t, out);
  if (!out) throw trace_io_error("error while writing " + path);
}

footprint compute_footprint(const trace& t) {
  footprint fp;
  if (t.events.empty()) return fp;
  std::unordered_set<uint32_t> words;
  words.reserve(1024);
  fp.min_addr = fp.max_addr = t.events.front().addr;
  for (const auto& e : t.events) {
    words.insert(e.word());
    fp.min_addr = std::min(fp.min_addr, e.addr);
    fp.max_addr = std::max(fp.max_addr, e.addr);
    if (e.kind == mem_op::load)
      ++fp.n_load;
    else
      ++fp.n_store;
  }
  fp.distinct_words = words.size();
  fp.span_words = (static_cast<uint64_t>(fp.max_addr) - fp.min_addr) / 4 + 1;
  return fp;
}

std::vector<interval_counts> interval_access_counts(const trace& t, const failure_schedule& s) {
  std::vector<interval_counts> counts(s.n_intervals());
  size_t j = 0;
  for (const auto& e : t.events) {
    while (j < s.boundaries.size() && e.cycle >= s.boundaries[j]) ++j;
    if (j == s.boundaries.size()) throw schedule_too_short(e.cycle);
    if (e.kind == mem_op::load)
      ++counts[j].n_load;
    else
      ++counts[j].n_store;
  }
  return counts;
}

trace gen_synthetic_trace(const synth_profile& profile, uint64_t seed) {
  if (profile.n_events == 0)
    throw std::invalid_argument("synthetic trace needs at least one event");
  if (profile.addr_range_words == 0)
    throw std::invalid_argument("synthetic trace needs a non-empty address range");
  if (profile.store_fraction < 0.0 || profile.store_fraction > 1.0)
    throw std::invalid_argument("store_fraction must lie in [0, 1]");

  trace t;
  t.events.reserve(profile.n_events);
  splitmix64 rng(seed);

  const uint32_t range = profile.addr_range_words;
  uint32_t window = std::max<uint32_t>(4, range / 16);
  window = std::min(window, range);
  const uint32_t repeats = 4;

  uint64_t cycle = 0;
  uint64_t walk = 0;
  uint64_t pos = 0;
  uint32_t base = 0;

  for (uint64_t i = 0; i < profile.n_events; ++i) {
    cycle += 1 + rng.next_below(10);
    bool is_store = rng.next_double() < profile.store_fraction;
    uint32_t word = 0;
    switch (profile.pattern) {
      case locality::sequential:
        word = static_cast<uint32_t>(walk++ % range);
        break;
      case locality::uniform:
        word = static_cast<uint32_t>(rng.next_below(range));
        break;
      case locality::looped:
        word = (base + static_cast<uint32_t>(pos % window)) % range;
        ++pos;
        if (pos == static_cast<uint64_t>(window) * repeats) {
          pos = 0;
          base = (base + window) % range;
        }
        break;
    }
    t.events.push_back({cycle, word << 2, is_store ? mem_op::store : mem_op::load});
  }
  return t;
}

}  // namespace ibsim
