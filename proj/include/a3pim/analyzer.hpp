#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "a3pim/ir.hpp"

namespace a3pim {

enum class Target : uint8_t { CPU, PIM };

inline const char* target_name(Target t) { return t == Target::CPU ? "CPU" : "PIM"; }

/// Architecture parameters for one side of the system. The defaults model a
/// 3 GHz 4-wide out-of-order core with a deep cache hierarchy (CPU) and a
/// 32-core array of 1-wide in-order cores sitting next to memory (PIM).
struct MachineModel {
  Target name = Target::CPU;
  uint32_t issue_width = 1;
  uint32_t ls_ports = 1;
  std::array<uint32_t, kOpcodeClassCount> latency{};  // cycles, indexed by OpcodeClass
  double miss_penalty_cycles = 0;                     // per last-level miss
  double clock_ghz = 3.0;
  uint32_t cores = 1;

  uint32_t latency_of(OpcodeClass op) const { return latency[static_cast<int>(op)]; }
};

MachineModel default_cpu_model();
MachineModel default_pim_model();

/// Misses per single execution of a region, keyed by region id.
using MissProfile = std::map<uint32_t, double>;

/// Per-region intrinsic statistics for both targets.
struct RegionMetrics {
  uint32_t region_id = 0;
  uint64_t uop_count = 0;
  uint64_t mem_op_count = 0;
  uint64_t compute_op_count = 0;
  uint64_t critical_path_cpu = 0;
  uint64_t critical_path_pim = 0;
  /// Cycles per single execution. Includes miss penalties only when a miss
  /// profile was supplied to analyze().
  double est_cycles_cpu = 0;
  double est_cycles_pim = 0;
  double port_pressure_cpu = 0;  // in [0, 1]
  double port_pressure_pim = 0;
  double arithmetic_intensity = 0;
  bool parallel_capable = false;

  // Carried over from the region for cost accounting.
  uint64_t frequency = 0;
  uint64_t trip_count = 0;
  double misses_per_exec = 0;
};

/// Longest path through the register-dependency DAG of the region's
/// instructions, weighted by the model's latency table.
uint64_t critical_path_cycles(const Region& region, const MachineModel& model);

/// max(ceil(uops/width), ceil(mem-ops/ports), critical path), plus
/// miss_count * miss_penalty when a miss count is given.
double estimate_cycles(const Region& region, const MachineModel& model,
                       std::optional<double> miss_count = std::nullopt);

/// Fraction of the region's miss-free cycle estimate during which the
/// load-store ports are busy: min(1, (mem-ops / ports) / cycles). Zero for
/// regions without memory operations.
double port_pressure(const Region& region, const MachineModel& model);

/// Compute instructions per memory instruction; branches count toward
/// neither. The denominator is clamped to 1.
double arithmetic_intensity(const Region& region);

std::vector<RegionMetrics> analyze(const Program& program, const MachineModel& cpu,
                                   const MachineModel& pim,
                                   const MissProfile* miss_profile = nullptr);

}  // namespace a3pim
