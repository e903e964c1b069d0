#include "ibsim/strategies.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cinttypes>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "ibsim/errors.hpp"

namespace ibsim {

uint64_t backup_report::total_words() const {
  uint64_t sum = 0;
  for (uint64_t w : per_interval_words) sum += w;
  return sum;
}

double backup_report::mean_words() const {
  if (per_interval_words.empty()) return 0.0;
  return static_cast<double>(total_words()) / static_cast<double>(per_interval_words.size());
}

double backup_report::mean_words_excluding_last() const {
  if (per_interval_words.size() < 2) return 0.0;
  uint64_t sum = total_words() - per_interval_words.back();
  return static_cast<double>(sum) / static_cast<double>(per_interval_words.size() - 1);
}

void backup_report::write_csv(std::ostream& out) const {
  out << "interval,strategy,block_size,words_saved\n";
  for (size_t i = 0; i < per_interval_words.size(); ++i)
    out << i << ',' << strategy_id << ',' << block_size_words << ','
        << per_interval_words[i] << '\n';
}

strategy_kind strategy_from_id(const std::string& id) {
  if (id == "full") return strategy_kind::full;
  if (id == "ua") return strategy_kind::ua;
  if (id == "ma") return strategy_kind::ma;
  if (id == "mb") return strategy_kind::mb;
  if (id == "oracle") return strategy_kind::oracle;
  if (id == "om") return strategy_kind::om;
  throw config_error("unknown strategy id: " + id);
}

const char* strategy_id(strategy_kind k) {
  switch (k) {
    case strategy_kind::full: return "full";
    case strategy_kind::ua: return "ua";
    case strategy_kind::ma: return "ma";
    case strategy_kind::mb: return "mb";
    case strategy_kind::oracle: return "oracle";
    case strategy_kind::om: return "om";
  }
  return "?";
}

namespace {

void check_block_size(uint32_t n) {
  if (n == 0 || n > 1024 || !std::has_single_bit(n)) throw invalid_block_size(n);
}

// Contiguous [begin, end) index ranges of each interval's events. Events are
// cycle-sorted, so intervals are slices. Throws when the schedule ends early.
std::vector<std::pair<size_t, size_t>> interval_slices(const trace& t,
                                                       const failure_schedule& s) {
  std::vector<std::pair<size_t, size_t>> slices(s.n_intervals());
  size_t j = 0;
  size_t begin = 0;
  const auto& ev = t.events;
  for (size_t k = 0; k <= ev.size(); ++k) {
    bool flushes = (k == ev.size());
    while (!flushes && j < s.boundaries.size() && ev[k].cycle >= s.boundaries[j]) {
      slices[j] = {begin, k};
      begin = k;
      ++j;
    }
    if (!flushes && j == s.boundaries.size()) throw schedule_too_short(ev[k].cycle);
  }
  for (; j < s.boundaries.size(); ++j) {
    slices[j] = {begin, t.events.size()};
    begin = t.events.size();
  }
  return slices;
}

word_set sorted_unique(std::vector<uint32_t>&& words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return std::move(words);
}

// Distinct words per interval, optionally restricted to stores.
std::vector<word_set> distinct_word_sets(const trace& t, const failure_schedule& s,
                                         bool stores_only) {
  auto slices = interval_slices(t, s);
  std::vector<word_set> sets(slices.size());
  for (size_t i = 0; i < slices.size(); ++i) {
    std::vector<uint32_t> words;
    for (size_t k = slices[i].first; k < slices[i].second; ++k) {
      const auto& e = t.events[k];
      if (!stores_only || e.kind == mem_op::store) words.push_back(e.word());
    }
    sets[i] = sorted_unique(std::move(words));
  }
  return sets;
}

std::vector<word_set> block_sets_expanded(const trace& t, const failure_schedule& s,
                                          uint32_t block_words) {
  check_block_size(block_words);
  const uint32_t shift = static_cast<uint32_t>(std::countr_zero(block_words));
  auto slices = interval_slices(t, s);
  std::vector<word_set> sets(slices.size());
  for (size_t i = 0; i < slices.size(); ++i) {
    std::vector<uint32_t> blocks;
    for (size_t k = slices[i].first; k < slices[i].second; ++k) {
      const auto& e = t.events[k];
      if (e.kind == mem_op::store) blocks.push_back(e.word() >> shift);
    }
    word_set uniq = sorted_unique(std::move(blocks));
    word_set words;
    words.reserve(uniq.size() * block_words);
    for (uint32_t b : uniq)
      for (uint32_t w = 0; w < block_words; ++w) words.push_back((b << shift) + w);
    sets[i] = std::move(words);
  }
  return sets;
}

word_set paged_span_words(const footprint& fp) {
  if (fp.span_words == 0) return {};
  uint64_t span_bytes = fp.span_words * 4;
  uint64_t pages = (span_bytes + 511) / 512;
  uint64_t n_words = pages * 128;
  word_set words;
  words.reserve(n_words);
  uint32_t first = fp.min_addr >> 2;
  for (uint64_t w = 0; w < n_words; ++w) words.push_back(first + static_cast<uint32_t>(w));
  return words;
}

backup_report report_from_sets(const char* id, uint32_t block,
                               const std::vector<word_set>& sets) {
  backup_report r;
  r.strategy_id = id;
  r.block_size_words = block;
  r.per_interval_words.reserve(sets.size());
  for (const auto& w : sets) r.per_interval_words.push_back(w.size());
  return r;
}

std::vector<word_set> intersect_sets(const std::vector<word_set>& a,
                                     const std::vector<word_set>& b) {
  assert(a.size() == b.size());
  std::vector<word_set> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    out[i].reserve(std::min(a[i].size(), b[i].size()));
    std::set_intersection(a[i].begin(), a[i].end(), b[i].begin(), b[i].end(),
                          std::back_inserter(out[i]));
  }
  return out;
}

}  // namespace

backup_report full_memory_backup(const footprint& fp, const failure_schedule& s) {
  backup_report r;
  r.strategy_id = "full";
  r.block_size_words = 1;
  uint64_t words = 0;
  if (fp.span_words > 0) {
    uint64_t pages = (fp.span_words * 4 + 511) / 512;
    words = pages * 128;
  }
  r.per_interval_words.assign(s.n_intervals(), words);
  return r;
}

backup_report used_address(const trace& t, const failure_schedule& s) {
  return report_from_sets("ua", 1, distinct_word_sets(t, s, false));
}

backup_report modified_address(const trace& t, const failure_schedule& s) {
  return report_from_sets("ma", 1, distinct_word_sets(t, s, true));
}

backup_report modified_block(const trace& t, const failure_schedule& s,
                             uint32_t block_size_words) {
  return report_from_sets("mb", block_size_words,
                          block_sets_expanded(t, s, block_size_words));
}

std::vector<word_set> alive_word_sets(const trace& t, const failure_schedule& s) {
  // Sanity-check coverage first; the backward pass would silently tolerate an
  // uncovered tail.
  interval_slices(t, s);

  size_t n = s.n_intervals();
  std::vector<word_set> alive(n);
  // First future access kind per word, maintained while walking backwards.
  std::unordered_map<uint32_t, mem_op> next_access;
  size_t k = t.events.size();
  for (size_t i = n; i-- > 0;) {
    uint64_t bound = s.boundaries[i];
    while (k > 0 && t.events[k - 1].cycle >= bound) {
      --k;
      next_access[t.events[k].word()] = t.events[k].kind;
    }
    word_set w;
    for (const auto& [word, op] : next_access)
      if (op == mem_op::load) w.push_back(word);
    std::sort(w.begin(), w.end());
    alive[i] = std::move(w);
  }
  return alive;
}

backup_report oracle(const trace& t, const failure_schedule& s) {
  return report_from_sets("oracle", 1, alive_word_sets(t, s));
}

backup_report oracle_modified(const trace& t, const failure_schedule& s) {
  auto om = intersect_sets(alive_word_sets(t, s), distinct_word_sets(t, s, true));
  return report_from_sets("om", 1, om);
}

aliveness_profile compute_aliveness_profile(const trace& t, const failure_schedule& s) {
  auto alive = alive_word_sets(t, s);
  auto written = distinct_word_sets(t, s, true);
  footprint fp = compute_footprint(t);
  double denom = fp.distinct_words > 0 ? static_cast<double>(fp.distinct_words) : 1.0;

  aliveness_profile p;
  p.alive_words.reserve(alive.size());
  for (size_t i = 0; i < alive.size(); ++i) {
    word_set both;
    std::set_intersection(alive[i].begin(), alive[i].end(), written[i].begin(),
                          written[i].end(), std::back_inserter(both));
    p.alive_words.push_back(alive[i].size());
    p.alive_modified_words.push_back(both.size());
    p.frac_alive.push_back(static_cast<double>(alive[i].size()) / denom);
    p.frac_alive_modified.push_back(static_cast<double>(both.size()) / denom);
  }
  return p;
}

std::vector<word_set> saved_word_sets(const trace& t, const failure_schedule& s,
                                      strategy_kind kind, uint32_t block_size_words) {
  switch (kind) {
    case strategy_kind::full: {
      word_set span = paged_span_words(compute_footprint(t));
      interval_slices(t, s);  // coverage check
      return std::vector<word_set>(s.n_intervals(), span);
    }
    case strategy_kind::ua:
      return distinct_word_sets(t, s, false);
    case strategy_kind::ma:
      return distinct_word_sets(t, s, true);
    case strategy_kind::mb:
      return block_sets_expanded(t, s, block_size_words);
    case strategy_kind::oracle:
      return alive_word_sets(t, s);
    case strategy_kind::om:
      return intersect_sets(alive_word_sets(t, s), distinct_word_sets(t, s, true));
  }
  throw std::logic_error("unreachable");
}

std::optional<counterexample> verify_sufficiency(const trace& t, const failure_schedule& s,
                                                 const std::vector<word_set>& saved) {
  if (saved.size() != s.n_intervals())
    throw std::invalid_argument("need one saved set per interval");

  // Value identity is tracked as a version stamp per store; stamp 0 is the
  // initial memory image, assumed present in NVM before the run.
  std::unordered_map<uint32_t, uint64_t> golden;  // uninterrupted execution
  std::unordered_map<uint32_t, uint64_t> sram;    // volatile copy under failures
  std::unordered_map<uint32_t, uint64_t> nvm;     // snapshot being maintained
  uint64_t stamp = 0;

  auto value_of = [](const std::unordered_map<uint32_t, uint64_t>& m, uint32_t w) {
    auto it = m.find(w);
    return it == m.end() ? 0ull : it->second;
  };

  size_t k = 0;
  const size_t n = s.n_intervals();
  for (size_t i = 0; i < n; ++i) {
    uint64_t bound = s.boundaries[i];
    for (; k < t.events.size() && t.events[k].cycle < bound; ++k) {
      const auto& e = t.events[k];
      uint32_t w = e.word();
      if (e.kind == mem_op::store) {
        ++stamp;
        golden[w] = stamp;
        sram[w] = stamp;
      } else if (value_of(sram, w) != value_of(golden, w)) {
        return counterexample{i, e.addr};
      }
    }
    if (i + 1 < n) {
      // Power failure: commit the policy's words, lose SRAM, restore fully.
      for (uint32_t w : saved[i]) nvm[w] = value_of(sram, w);
      sram = nvm;
    }
  }
  if (k < t.events.size()) throw schedule_too_short(t.events[k].cycle);
  return std::nullopt;
}

uint64_t dirty_bits_required(uint64_t mem_words, uint32_t block_size_words) {
  check_block_size(block_size_words);
  return (mem_words + block_size_words - 1) / block_size_words;
}

dirty_bit_map::dirty_bit_map(uint64_t mem_words, uint32_t block_size_words)
    : block_words_(block_size_words) {
  check_block_size(block_size_words);
  block_shift_ = static_cast<uint32_t>(std::countr_zero(block_size_words));
  bits_.assign((mem_words + block_size_words - 1) / block_size_words, false);
}

void dirty_bit_map::mark_word(uint64_t word_index) {
  uint64_t block = word_index >> block_shift_;
  if (!bits_[block]) {
    bits_[block] = true;
    ++set_count_;
  }
}

void dirty_bit_map::clear() {
  bits_.assign(bits_.size(), false);
  set_count_ = 0;
}

}  // namespace ibsim
