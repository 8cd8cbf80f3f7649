#include "a3pim/clustering.hpp"

#include <algorithm>
#include <set>

namespace a3pim {

namespace {

std::map<uint64_t, uint64_t> static_addr_touches(const Region& region) {
  std::map<uint64_t, uint64_t> touches;
  for (const Instruction& instr : region.instructions) {
    if (instr.memory_ref) touches[*instr.memory_ref] += 1;
  }
  return touches;
}

std::map<std::string, uint64_t> register_touches(const Region& region) {
  std::map<std::string, uint64_t> touches;
  for (const Instruction& instr : region.instructions) {
    if (instr.dest) touches[*instr.dest] += 1;
    for (const std::string& src : instr.sources) touches[src] += 1;
  }
  return touches;
}

template <typename K>
uint64_t min_count_overlap(const std::map<K, uint64_t>& a, const std::map<K, uint64_t>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  uint64_t total = 0;
  for (const auto& [key, count] : small) {
    auto it = large.find(key);
    if (it != large.end()) total += std::min(count, it->second);
  }
  return total;
}

template <typename K>
bool keys_intersect(const std::map<K, uint64_t>& a, const std::map<K, uint64_t>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& [key, count] : small) {
    (void)count;
    if (large.count(key)) return true;
  }
  return false;
}

template <typename K>
void merge_counts(std::map<K, uint64_t>& into, const std::map<K, uint64_t>& from) {
  for (const auto& [key, count] : from) into[key] += count;
}

ClusterInfo make_singleton(const Region& region, const Trace* trace, bool use_trace) {
  ClusterInfo c;
  c.members = {region.id};
  c.instruction_total = region.instructions.size();
  c.frequency_total = region.frequency;
  c.parallel = region.parallel;
  c.trip_count = region.trip_count;
  c.reg_touches = register_touches(region);
  if (use_trace && trace) {
    for (const TraceEvent& event : trace->events) {
      if (event.region_id != region.id) continue;
      for (uint64_t addr : event.addresses) c.addr_touches[addr] += 1;
    }
  } else {
    c.addr_touches = static_addr_touches(region);
  }
  return c;
}

PairReuse reuse_from_aggregates(uint32_t id_a, uint32_t id_b,
                                const std::map<uint64_t, uint64_t>& addrs_a,
                                const std::map<uint64_t, uint64_t>& addrs_b,
                                const std::map<std::string, uint64_t>& regs_a,
                                const std::map<std::string, uint64_t>& regs_b,
                                uint64_t instrs_a, uint64_t instrs_b) {
  PairReuse pr;
  pr.region_a = id_a;
  pr.region_b = id_b;
  pr.memory_reuse = min_count_overlap(addrs_a, addrs_b);
  pr.register_reuse = min_count_overlap(regs_a, regs_b);
  pr.instruction_count = std::max<uint64_t>(1, std::max(instrs_a, instrs_b));
  return pr;
}

}  // namespace

std::unordered_map<uint32_t, size_t> ClusterSet::region_index() const {
  std::unordered_map<uint32_t, size_t> index;
  for (size_t i = 0; i < clusters.size(); ++i) {
    for (uint32_t id : clusters[i].members) index[id] = i;
  }
  return index;
}

PairReuse pair_reuse(const Region& a, const Region& b) {
  return reuse_from_aggregates(a.id, b.id, static_addr_touches(a), static_addr_touches(b),
                               register_touches(a), register_touches(b), a.instructions.size(),
                               b.instructions.size());
}

PairReuse pair_reuse(const ClusterInfo& a, const ClusterInfo& b) {
  return reuse_from_aggregates(a.id(), b.id(), a.addr_touches, b.addr_touches, a.reg_touches,
                               b.reg_touches, a.instruction_total, b.instruction_total);
}

double connectivity(const PairReuse& pr, const ClusteringConfig& cfg) {
  if (pr.memory_reuse == 0 && pr.register_reuse == 0) return 0;
  double raw = (cfg.alpha * static_cast<double>(pr.memory_reuse) +
                (1.0 - cfg.alpha) * static_cast<double>(pr.register_reuse)) /
               static_cast<double>(pr.instruction_count);
  return std::min(1.0, raw);
}

ClusterSet singleton_clusters(const Program& program, const Trace* trace, bool use_trace) {
  ClusterSet set;
  set.clusters.reserve(program.regions.size());
  for (const Region& region : program.regions) {
    set.clusters.push_back(make_singleton(region, trace, use_trace));
  }
  std::sort(set.clusters.begin(), set.clusters.end(),
            [](const ClusterInfo& a, const ClusterInfo& b) { return a.id() < b.id(); });
  return set;
}

ClusterSet cluster(const Program& program, const ClusteringConfig& cfg, const Trace* trace) {
  ClusterSet set = singleton_clusters(program, trace, cfg.use_trace);

  // Undirected CFG adjacency between region ids.
  std::set<std::pair<uint32_t, uint32_t>> adjacent;
  for (const CfgEdge& e : program.cfg_edges) {
    adjacent.insert({std::min(e.from, e.to), std::max(e.from, e.to)});
  }
  auto clusters_adjacent = [&](const ClusterInfo& a, const ClusterInfo& b) {
    for (uint32_t u : a.members) {
      for (uint32_t v : b.members) {
        if (adjacent.count({std::min(u, v), std::max(u, v)})) return true;
      }
    }
    return false;
  };
  auto is_candidate = [&](const ClusterInfo& a, const ClusterInfo& b) {
    if (cfg.policy == PairPolicy::AllPairs) return true;
    return clusters_adjacent(a, b) || keys_intersect(a.addr_touches, b.addr_touches) ||
           keys_intersect(a.reg_touches, b.reg_touches);
  };

  while (set.clusters.size() > 1) {
    double best_score = -1;
    size_t best_i = 0, best_j = 0;
    for (size_t i = 0; i + 1 < set.clusters.size(); ++i) {
      for (size_t j = i + 1; j < set.clusters.size(); ++j) {
        if (!is_candidate(set.clusters[i], set.clusters[j])) continue;
        double score = connectivity(pair_reuse(set.clusters[i], set.clusters[j]), cfg);
        // Clusters are kept sorted by id, so the first (i, j) reaching a
        // score wins ties: lower ids first.
        if (score >= cfg.theta && score > best_score) {
          best_score = score;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_score < 0) break;

    ClusterInfo& into = set.clusters[best_i];
    ClusterInfo& from = set.clusters[best_j];
    into.members.insert(into.members.end(), from.members.begin(), from.members.end());
    std::sort(into.members.begin(), into.members.end());
    into.instruction_total += from.instruction_total;
    into.frequency_total += from.frequency_total;
    into.parallel = into.parallel || from.parallel;
    into.trip_count = std::max(into.trip_count, from.trip_count);
    merge_counts(into.addr_touches, from.addr_touches);
    merge_counts(into.reg_touches, from.reg_touches);
    set.clusters.erase(set.clusters.begin() + static_cast<ptrdiff_t>(best_j));
    std::sort(set.clusters.begin(), set.clusters.end(),
              [](const ClusterInfo& a, const ClusterInfo& b) { return a.id() < b.id(); });
  }
  return set;
}

}  // namespace a3pim
