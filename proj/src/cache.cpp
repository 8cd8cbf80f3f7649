#include "a3pim/cache.hpp"

#include <list>
#include <stdexcept>
#include <unordered_map>

namespace a3pim {

namespace {

// One cache set with LRU ordering: front = most recent.
struct CacheSet {
  std::list<uint64_t> lines;

  bool access(uint64_t line, uint32_t associativity) {
    for (auto it = lines.begin(); it != lines.end(); ++it) {
      if (*it == line) {
        lines.erase(it);
        lines.push_front(line);
        return true;
      }
    }
    lines.push_front(line);
    if (lines.size() > associativity) lines.pop_back();
    return false;
  }
};

}  // namespace

CacheSimResult simulate_cache(const Trace& trace, const CacheConfig& cfg) {
  if (cfg.line_bytes == 0 || cfg.associativity == 0 || cfg.num_sets() == 0) {
    throw std::invalid_argument("cache config must have nonzero sets, ways and line size");
  }
  std::unordered_map<uint64_t, CacheSet> sets;
  CacheSimResult result;
  for (const TraceEvent& event : trace.events) {
    RegionCacheStats& stats = result.per_region[event.region_id];
    stats.region_id = event.region_id;
    for (uint64_t addr : event.addresses) {
      uint64_t line = addr / cfg.line_bytes;
      uint64_t set_index = line % cfg.num_sets();
      bool hit = sets[set_index].access(line, cfg.associativity);
      stats.accesses += 1;
      result.total_accesses += 1;
      if (!hit) {
        stats.misses += 1;
        result.total_misses += 1;
      } else {
        stats.hits += 1;
      }
    }
  }
  return result;
}

double mpki(const RegionCacheStats& stats, const Region& region) {
  uint64_t executed = region.frequency * region.instructions.size();
  if (executed == 0) return 0;
  return static_cast<double>(stats.misses) * 1000.0 / static_cast<double>(executed);
}

MissProfile miss_profile(const CacheSimResult& sim, const Program& program) {
  MissProfile profile;
  for (const Region& region : program.regions) {
    auto it = sim.per_region.find(region.id);
    if (it == sim.per_region.end() || region.frequency == 0) {
      profile[region.id] = 0;
      continue;
    }
    profile[region.id] =
        static_cast<double>(it->second.misses) / static_cast<double>(region.frequency);
  }
  return profile;
}

}  // namespace a3pim
