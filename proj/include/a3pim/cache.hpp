#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "a3pim/analyzer.hpp"
#include "a3pim/ir.hpp"

namespace a3pim {

struct CacheConfig {
  uint64_t size_bytes = 2 * 1024 * 1024;
  uint32_t associativity = 16;
  uint32_t line_bytes = 64;

  uint64_t num_sets() const { return size_bytes / (static_cast<uint64_t>(line_bytes) * associativity); }
};

struct RegionCacheStats {
  uint32_t region_id = 0;
  uint64_t accesses = 0;
  uint64_t hits = 0;
  uint64_t misses = 0;
};

struct CacheSimResult {
  std::map<uint32_t, RegionCacheStats> per_region;
  uint64_t total_accesses = 0;
  uint64_t total_misses = 0;
};

// Walks the trace in order through a set-associative LRU cache.
CacheSimResult simulate_cache(const Trace& trace, const CacheConfig& cfg);

// Misses per 1000 executed instructions for one region. Executed
// instructions = frequency * static instruction count.
double mpki(const RegionCacheStats& stats, const Region& region);

// Average misses per single execution of each region, for cycle estimates.
MissProfile miss_profile(const CacheSimResult& sim, const Program& program);

}  // namespace a3pim
