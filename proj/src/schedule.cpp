#include "ibsim/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "ibsim/errors.hpp"
#include "ibsim/rng.hpp"

namespace ibsim {

size_t failure_schedule::interval_of(uint64_t cycle) const {
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), cycle);
  if (it == boundaries.end()) throw schedule_too_short(cycle);
  return static_cast<size_t>(it - boundaries.begin());
}

std::string failure_schedule::to_json() const {
  nlohmann::ordered_json j;
  j["boundaries"] = boundaries;
  return j.dump();
}

failure_schedule failure_schedule::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("bad schedule json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("boundaries") || !j["boundaries"].is_array())
    throw config_error("schedule json needs a 'boundaries' array");
  failure_schedule s;
  uint64_t prev = 0;
  for (const auto& v : j["boundaries"]) {
    if (!v.is_number_unsigned()) throw config_error("schedule boundaries must be non-negative integers");
    uint64_t b = v.get<uint64_t>();
    if (b == 0 || (!s.boundaries.empty() && b <= prev))
      throw config_error("schedule boundaries must be strictly increasing and positive");
    s.boundaries.push_back(b);
    prev = b;
  }
  return s;
}

failure_schedule fixed_schedule(uint64_t last_cycle, uint64_t n_prog_cycles) {
  if (n_prog_cycles == 0) throw invalid_interval_length();
  failure_schedule s;
  uint64_t n = last_cycle / n_prog_cycles + 1;
  s.boundaries.reserve(n);
  for (uint64_t k = 1; k <= n; ++k) s.boundaries.push_back(k * n_prog_cycles);
  return s;
}

failure_schedule random_schedule(uint64_t last_cycle, double failure_prob_per_cycle,
                                 uint64_t seed) {
  double p = failure_prob_per_cycle;
  if (!(p > 0.0) || !(p < 1.0)) throw invalid_probability(p);
  splitmix64 rng(seed);
  const double log1mp = std::log1p(-p);
  failure_schedule s;
  uint64_t cycle = 0;
  for (;;) {
    double u = 1.0 - rng.next_double();  // (0, 1], keeps log finite
    uint64_t gap = 1 + static_cast<uint64_t>(std::floor(std::log(u) / log1mp));
    cycle += gap;
    if (cycle > last_cycle) break;
    s.boundaries.push_back(cycle);
  }
  s.boundaries.push_back(last_cycle + 1);
  return s;
}

}  // namespace ibsim
