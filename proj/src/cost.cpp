#include "a3pim/cost.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace a3pim {

namespace {

double side_line_ns(Target side, const CostConfig& cfg) {
  return side == Target::CPU ? cfg.cl_flush_fetch_cpu_ns : cfg.cl_flush_fetch_pim_ns;
}

}  // namespace

std::map<uint32_t, Target> region_assignment(const ClusterSet& clusters,
                                             const Schedule& schedule) {
  std::map<uint32_t, Target> assignment;
  for (const ClusterInfo& c : clusters.clusters) {
    auto it = schedule.find(c.id());
    if (it == schedule.end()) {
      throw std::invalid_argument("schedule has no entry for cluster " + std::to_string(c.id()));
    }
    for (uint32_t member : c.members) assignment[member] = it->second;
  }
  return assignment;
}

double line_transfer_ns(Target from, Target to, const CostConfig& cfg) {
  return side_line_ns(from, cfg) + side_line_ns(to, cfg);
}

double exec_cost_ns(const RegionMetrics& m, Target side, const MachineModel& cpu,
                    const MachineModel& pim, const CostConfig& cfg) {
  (void)cfg;
  double cycles = side == Target::CPU ? m.est_cycles_cpu : m.est_cycles_pim;
  double clock = side == Target::CPU ? cpu.clock_ghz : pim.clock_ghz;
  double total = static_cast<double>(m.frequency) * cycles / clock;
  if (side == Target::PIM && m.parallel_capable) {
    uint64_t lanes = std::min<uint64_t>(m.trip_count, pim.cores);
    if (lanes > 1) total /= static_cast<double>(lanes);
  }
  return total;
}

double trace_data_movement_ns(const Trace& trace,
                              const std::map<uint32_t, Target>& assignment,
                              const CostConfig& cfg) {
  std::unordered_map<uint64_t, Target> line_side;
  double total = 0;
  for (const TraceEvent& event : trace.events) {
    Target side = assignment.at(event.region_id);
    for (uint64_t addr : event.addresses) {
      uint64_t line = addr / cfg.line_bytes;
      auto [it, inserted] = line_side.try_emplace(line, side);
      if (!inserted && it->second != side) {
        total += line_transfer_ns(it->second, side, cfg);
        it->second = side;
      }
    }
  }
  return total;
}

double register_data_movement_ns(const Program& program,
                                 const std::map<uint32_t, Target>& assignment,
                                 const CostConfig& cfg) {
  double total = 0;
  for (const CfgEdge& e : program.cfg_edges) {
    Target from = assignment.at(e.from);
    Target to = assignment.at(e.to);
    if (from == to) continue;
    if (pair_reuse(program.region(e.from), program.region(e.to)).register_reuse == 0) continue;
    total += static_cast<double>(e.count) * cfg.register_dm_lines * line_transfer_ns(from, to, cfg);
  }
  return total;
}

double context_switch_ns(const Program& program,
                         const std::map<uint32_t, Target>& assignment,
                         const CostConfig& cfg) {
  uint64_t crossings = 0;
  for (const CfgEdge& e : program.cfg_edges) {
    if (assignment.at(e.from) != assignment.at(e.to)) crossings += e.count;
  }
  return static_cast<double>(crossings) * cfg.context_switch_cycles / cfg.clock_ghz;
}

CostBreakdown total_cost(const Program& program, const ClusterSet& clusters,
                         const Schedule& schedule,
                         const std::vector<RegionMetrics>& metrics,
                         const MachineModel& cpu, const MachineModel& pim,
                         const CostConfig& cfg, const Trace* trace) {
  std::map<uint32_t, Target> assignment = region_assignment(clusters, schedule);

  CostBreakdown bd;
  for (const RegionMetrics& m : metrics) {
    bd.exec_ns += exec_cost_ns(m, assignment.at(m.region_id), cpu, pim, cfg);
  }
  if (trace) bd.cl_dm_ns += trace_data_movement_ns(*trace, assignment, cfg);
  bd.cl_dm_ns += register_data_movement_ns(program, assignment, cfg);
  bd.cxt_ns = context_switch_ns(program, assignment, cfg);
  bd.total_ns = bd.exec_ns + bd.cl_dm_ns + bd.cxt_ns;
  return bd;
}

}  // namespace a3pim
