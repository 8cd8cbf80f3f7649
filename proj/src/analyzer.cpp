#include "a3pim/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace a3pim {

namespace {

std::array<uint32_t, kOpcodeClassCount> make_latency_table(uint32_t ialu, uint32_t fadd,
                                                           uint32_t fmul, uint32_t div,
                                                           uint32_t load, uint32_t store,
                                                           uint32_t br, uint32_t mov) {
  std::array<uint32_t, kOpcodeClassCount> t{};
  t[static_cast<int>(OpcodeClass::IntAlu)] = ialu;
  t[static_cast<int>(OpcodeClass::FpAdd)] = fadd;
  t[static_cast<int>(OpcodeClass::FpMul)] = fmul;
  t[static_cast<int>(OpcodeClass::Div)] = div;
  t[static_cast<int>(OpcodeClass::Load)] = load;
  t[static_cast<int>(OpcodeClass::Store)] = store;
  t[static_cast<int>(OpcodeClass::Branch)] = br;
  t[static_cast<int>(OpcodeClass::Move)] = mov;
  return t;
}

}  // namespace

MachineModel default_cpu_model() {
  MachineModel m;
  m.name = Target::CPU;
  m.issue_width = 4;
  m.ls_ports = 2;
  m.latency = make_latency_table(1, 3, 4, 20, 4, 1, 1, 1);
  m.miss_penalty_cycles = 180;  // 60 ns line fill at 3 GHz
  m.clock_ghz = 3.0;
  m.cores = 1;
  return m;
}

MachineModel default_pim_model() {
  MachineModel m;
  m.name = Target::PIM;
  m.issue_width = 1;
  m.ls_ports = 1;
  m.latency = make_latency_table(1, 3, 4, 20, 2, 1, 1, 1);  // near-memory loads
  m.miss_penalty_cycles = 90;  // 30 ns line fill at 3 GHz
  m.clock_ghz = 3.0;
  m.cores = 32;
  return m;
}

uint64_t critical_path_cycles(const Region& region, const MachineModel& model) {
  // finish[r] = completion cycle of the last writer of register r.
  std::unordered_map<std::string, uint64_t> finish;
  uint64_t longest = 0;
  for (const Instruction& instr : region.instructions) {
    uint64_t start = 0;
    for (const std::string& src : instr.sources) {
      auto it = finish.find(src);
      if (it != finish.end()) start = std::max(start, it->second);
    }
    uint64_t done = start + model.latency_of(instr.opcode);
    if (instr.dest) finish[*instr.dest] = done;
    longest = std::max(longest, done);
  }
  return longest;
}

double estimate_cycles(const Region& region, const MachineModel& model,
                       std::optional<double> miss_count) {
  uint64_t uops = region.instructions.size();
  uint64_t mem_ops = 0;
  for (const Instruction& instr : region.instructions) {
    if (is_memory_op(instr.opcode)) ++mem_ops;
  }
  uint64_t throughput = (uops + model.issue_width - 1) / model.issue_width;
  uint64_t port_bound = (mem_ops + model.ls_ports - 1) / model.ls_ports;
  uint64_t base = std::max({throughput, port_bound, critical_path_cycles(region, model)});
  double cycles = static_cast<double>(base);
  if (miss_count) cycles += *miss_count * model.miss_penalty_cycles;
  return cycles;
}

double port_pressure(const Region& region, const MachineModel& model) {
  uint64_t mem_ops = 0;
  for (const Instruction& instr : region.instructions) {
    if (is_memory_op(instr.opcode)) ++mem_ops;
  }
  if (mem_ops == 0) return 0;
  double cycles = estimate_cycles(region, model, std::nullopt);
  double busy = static_cast<double>(mem_ops) / model.ls_ports;
  return std::min(1.0, busy / cycles);
}

double arithmetic_intensity(const Region& region) {
  uint64_t compute = 0;
  uint64_t mem = 0;
  for (const Instruction& instr : region.instructions) {
    if (is_memory_op(instr.opcode)) {
      ++mem;
    } else if (is_compute_op(instr.opcode)) {
      ++compute;
    }
  }
  return static_cast<double>(compute) / static_cast<double>(std::max<uint64_t>(1, mem));
}

std::vector<RegionMetrics> analyze(const Program& program, const MachineModel& cpu,
                                   const MachineModel& pim, const MissProfile* miss_profile) {
  std::vector<RegionMetrics> out;
  out.reserve(program.regions.size());
  for (const Region& region : program.regions) {
    RegionMetrics m;
    m.region_id = region.id;
    m.uop_count = region.instructions.size();
    for (const Instruction& instr : region.instructions) {
      if (is_memory_op(instr.opcode)) {
        ++m.mem_op_count;
      } else if (is_compute_op(instr.opcode)) {
        ++m.compute_op_count;
      }
    }
    if (miss_profile) {
      auto it = miss_profile->find(region.id);
      if (it != miss_profile->end()) m.misses_per_exec = it->second;
    }
    m.critical_path_cpu = critical_path_cycles(region, cpu);
    m.critical_path_pim = critical_path_cycles(region, pim);
    std::optional<double> misses =
        miss_profile ? std::optional<double>(m.misses_per_exec) : std::nullopt;
    m.est_cycles_cpu = estimate_cycles(region, cpu, misses);
    m.est_cycles_pim = estimate_cycles(region, pim, misses);
    m.port_pressure_cpu = port_pressure(region, cpu);
    m.port_pressure_pim = port_pressure(region, pim);
    m.arithmetic_intensity = arithmetic_intensity(region);
    m.parallel_capable = region.parallel && region.trip_count >= pim.cores;
    m.frequency = region.frequency;
    m.trip_count = region.trip_count;
    out.push_back(m);
  }
  return out;
}

}  // namespace a3pim
