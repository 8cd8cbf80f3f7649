#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "a3pim/ir.hpp"

namespace a3pim {

/// Data coupling between two regions (or two clusters).
struct PairReuse {
  uint32_t region_a = 0;
  uint32_t region_b = 0;
  /// Sum over shared byte addresses of min(touches in a, touches in b).
  uint64_t memory_reuse = 0;
  /// Sum over shared registers of min(touches in a, touches in b); a touch is
  /// any read or write.
  uint64_t register_reuse = 0;
  /// max(|a.instructions|, |b.instructions|), at least 1.
  uint64_t instruction_count = 1;
};

/// Which cluster pairs are considered for merging.
enum class PairPolicy {
  /// Clusters adjacent in the CFG or sharing at least one address/register.
  AdjacentOrSharing,
  /// Every pair. Quadratic; intended for small programs and oracle tests.
  AllPairs,
};

struct ClusteringConfig {
  double alpha = 0.5;  // weight of memory reuse vs register reuse
  double theta = 0.1;  // merge threshold on connectivity
  PairPolicy policy = PairPolicy::AdjacentOrSharing;
  /// Count address touches from the trace instead of the static memory_ref
  /// fields when a trace is available.
  bool use_trace = false;
};

/// A merged group of regions with the aggregates needed to rescore it
/// against other clusters.
struct ClusterInfo {
  std::vector<uint32_t> members;  // region ids, ascending
  uint64_t instruction_total = 0;
  uint64_t frequency_total = 0;
  bool parallel = false;
  uint64_t trip_count = 0;                     // max over members
  std::map<uint64_t, uint64_t> addr_touches;   // byte address -> touch count
  std::map<std::string, uint64_t> reg_touches; // register -> touch count

  uint32_t id() const { return members.front(); }
};

/// A partition of the program's regions, ordered by cluster id (= smallest
/// member region id).
struct ClusterSet {
  std::vector<ClusterInfo> clusters;

  /// region id -> index into clusters.
  std::unordered_map<uint32_t, size_t> region_index() const;
};

PairReuse pair_reuse(const Region& a, const Region& b);
PairReuse pair_reuse(const ClusterInfo& a, const ClusterInfo& b);

/// min(1, (alpha * memory_reuse + (1 - alpha) * register_reuse) /
/// instruction_count). Zero when both reuse counts are zero.
double connectivity(const PairReuse& pr, const ClusteringConfig& cfg);

/// Agglomerative merge: repeatedly merge the highest-connectivity candidate
/// pair with score >= theta, rescoring from cluster aggregates, until no pair
/// qualifies. Ties break toward the pair with the smaller cluster ids.
ClusterSet cluster(const Program& program, const ClusteringConfig& cfg,
                   const Trace* trace = nullptr);

/// The identity partition, with per-region aggregates filled in.
ClusterSet singleton_clusters(const Program& program, const Trace* trace = nullptr,
                              bool use_trace = false);

}  // namespace a3pim
