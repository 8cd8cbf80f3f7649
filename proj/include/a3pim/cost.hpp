#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "a3pim/analyzer.hpp"
#include "a3pim/clustering.hpp"
#include "a3pim/ir.hpp"

namespace a3pim {

struct CostConfig {
  /// Flushing or fetching one cache line costs this much on each side.
  double cl_flush_fetch_cpu_ns = 60;
  double cl_flush_fetch_pim_ns = 30;
  /// Lines of live registers spilled and refilled when control crosses
  /// sides between regions that share registers.
  uint32_t register_dm_lines = 2;
  double context_switch_cycles = 800;
  /// Clock used to convert context-switch cycles to time.
  double clock_ghz = 3.0;
  uint32_t line_bytes = 64;
};

/// Cluster id -> side the cluster runs on.
using Schedule = std::map<uint32_t, Target>;

struct CostBreakdown {
  double exec_ns = 0;
  double cl_dm_ns = 0;  // cache-line data movement, including register spills
  double cxt_ns = 0;    // context switches
  double total_ns = 0;
};

/// Expands a cluster-level schedule to region id -> side. Throws
/// std::invalid_argument when the schedule misses a cluster.
std::map<uint32_t, Target> region_assignment(const ClusterSet& clusters,
                                             const Schedule& schedule);

/// Flush at the source side plus fetch at the destination side, one line.
double line_transfer_ns(Target from, Target to, const CostConfig& cfg);

/// Time this region contributes over all its executions on `side`.
/// Regions that are parallel-capable and placed on PIM spread their
/// iterations across min(trip count, PIM cores) cores.
double exec_cost_ns(const RegionMetrics& m, Target side, const MachineModel& cpu,
                    const MachineModel& pim, const CostConfig& cfg);

/// Walks the trace tracking which side owns each cache line. The first touch
/// of a line is free; every touch from the other side pays one transfer and
/// moves ownership.
double trace_data_movement_ns(const Trace& trace,
                              const std::map<uint32_t, Target>& assignment,
                              const CostConfig& cfg);

/// For every CFG edge crossing sides whose endpoint regions share at least
/// one register, charges register_dm_lines transfers per traversal.
double register_data_movement_ns(const Program& program,
                                 const std::map<uint32_t, Target>& assignment,
                                 const CostConfig& cfg);

/// context_switch_cycles / clock_ghz per traversal of a side-crossing edge.
double context_switch_ns(const Program& program,
                         const std::map<uint32_t, Target>& assignment,
                         const CostConfig& cfg);

/// Full objective for one schedule. The trace is optional; without it the
/// data-movement term only covers register spills. Metrics must come from
/// analyze() on the same program.
CostBreakdown total_cost(const Program& program, const ClusterSet& clusters,
                         const Schedule& schedule,
                         const std::vector<RegionMetrics>& metrics,
                         const MachineModel& cpu, const MachineModel& pim,
                         const CostConfig& cfg, const Trace* trace = nullptr);

}  // namespace a3pim
