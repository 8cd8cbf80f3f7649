#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "a3pim/analyzer.hpp"
#include "a3pim/cache.hpp"
#include "a3pim/clustering.hpp"
#include "a3pim/cost.hpp"
#include "a3pim/ir.hpp"

namespace a3pim {

struct ClassifierThresholds {
  double pressure_threshold = 0.5;
  /// Arithmetic intensity below this counts as memory-intensive.
  double ai_threshold = 1.0;
  /// Used by the mpki baseline only.
  double mpki_threshold = 10.0;
};

/// Everything the pipeline needs, loadable from a flat key=value file.
struct ToolkitConfig {
  MachineModel cpu = default_cpu_model();
  MachineModel pim = default_pim_model();
  CostConfig cost;
  CacheConfig cache;
  ClusteringConfig clustering;
  ClassifierThresholds thresholds;
  /// Exhaustive enumeration refuses more units than this.
  uint32_t tub_max_units = 20;
};

/// A strategy that cannot run on the given inputs: a trace is missing or the
/// unit count exceeds the enumeration limit.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strategy : uint8_t {
  CpuOnly,
  PimOnly,
  Mpki,
  Greedy,
  Tub,
  A3PimBbls,
  A3PimFunc,
};

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(std::string_view name);
/// Canonical report order: cpu-only, pim-only, mpki, greedy, tub,
/// a3pim-bbls, a3pim-func.
std::vector<Strategy> all_strategies();

enum class Granularity : uint8_t { BasicBlocks, Functions };

/// Frequency-weighted aggregates over a cluster's member regions, the inputs
/// to classification.
struct ClusterTraits {
  uint32_t cluster_id = 0;
  /// min(1, (sum f*mem / ls_ports) / (sum f*miss-free-cycles)) on the CPU
  /// model; 0 without memory ops.
  double port_pressure = 0;
  /// sum f*compute / max(1, sum f*mem).
  double arithmetic_intensity = 0;
  /// Any member parallel and max trip count covers the PIM cores.
  bool parallel_capable = false;
};

ClusterTraits cluster_traits(const ClusterInfo& cluster, const Program& program,
                             const MachineModel& cpu, const MachineModel& pim);

/// Nested classification: parallel-capable -> PIM; else port pressure at or
/// above threshold -> PIM; else arithmetic intensity below threshold -> PIM;
/// else CPU.
Target classify_cluster(const ClusterTraits& traits, const ClassifierThresholds& th);

struct StrategyResult {
  Strategy strategy = Strategy::CpuOnly;
  /// The program the schedule refers to; coarsened for function granularity.
  Program program;
  ClusterSet clusters;
  Schedule schedule;
  CostBreakdown breakdown;
};

StrategyResult baseline_cpu_only(const Program& program, const Trace* trace,
                                 const ToolkitConfig& cfg);
StrategyResult baseline_pim_only(const Program& program, const Trace* trace,
                                 const ToolkitConfig& cfg);
/// Region to PIM iff its MPKI reaches thresholds.mpki_threshold. Requires a
/// trace.
StrategyResult baseline_mpki(const Program& program, const Trace* trace,
                             const ToolkitConfig& cfg);
/// Each region goes to the side with the lower execution cost, ignoring all
/// switching terms. Ties go to the CPU.
StrategyResult baseline_greedy(const Program& program, const Trace* trace,
                               const ToolkitConfig& cfg);
/// Exhaustive minimum over all 2^N region assignments. Ties break to the
/// lexicographically smallest assignment string (C before P, regions in id
/// order).
StrategyResult theoretical_upper_bound(const Program& program, const Trace* trace,
                                       const ToolkitConfig& cfg);
/// Two stages: affinity clustering, then per-cluster classification. For
/// function granularity the program and trace are coarsened first.
StrategyResult a3pim(const Program& program, const Trace* trace, const ToolkitConfig& cfg,
                     Granularity granularity);

StrategyResult run_strategy(Strategy strategy, const Program& program, const Trace* trace,
                            const ToolkitConfig& cfg);

/// Metrics the pipeline feeds to the cost model: miss profile from the cache
/// simulator when a trace is present, miss-free otherwise.
std::vector<RegionMetrics> pipeline_metrics(const Program& program, const Trace* trace,
                                            const ToolkitConfig& cfg);

}  // namespace a3pim
