#include <vector>

#include "a3pim/analyzer.hpp"
#include "doctest.h"
#include "support/builders.hpp"

using namespace a3pim;
namespace tb = a3pim::testing;

namespace {

Region independent_ialu(int n) {
  std::vector<Instruction> instrs;
  for (int i = 0; i < n; ++i) instrs.push_back(tb::op(OpcodeClass::IntAlu, "t" + std::to_string(i)));
  return tb::block(0, std::move(instrs));
}

}  // namespace

TEST_CASE("default machine models carry the documented parameters") {
  MachineModel cpu = default_cpu_model();
  CHECK(cpu.name == Target::CPU);
  CHECK(cpu.issue_width == 4);
  CHECK(cpu.ls_ports == 2);
  CHECK(cpu.miss_penalty_cycles == 180);
  CHECK(cpu.clock_ghz == 3.0);
  CHECK(cpu.cores == 1);
  CHECK(cpu.latency_of(OpcodeClass::IntAlu) == 1);
  CHECK(cpu.latency_of(OpcodeClass::FpAdd) == 3);
  CHECK(cpu.latency_of(OpcodeClass::FpMul) == 4);
  CHECK(cpu.latency_of(OpcodeClass::Div) == 20);
  CHECK(cpu.latency_of(OpcodeClass::Load) == 4);
  CHECK(cpu.latency_of(OpcodeClass::Store) == 1);
  CHECK(cpu.latency_of(OpcodeClass::Branch) == 1);
  CHECK(cpu.latency_of(OpcodeClass::Move) == 1);

  MachineModel pim = default_pim_model();
  CHECK(pim.name == Target::PIM);
  CHECK(pim.issue_width == 1);
  CHECK(pim.ls_ports == 1);
  CHECK(pim.miss_penalty_cycles == 90);
  CHECK(pim.cores == 32);
  CHECK(pim.latency_of(OpcodeClass::Load) == 2);  // near-memory load
  CHECK(pim.latency_of(OpcodeClass::Div) == 20);
}

TEST_CASE("critical path follows register dependency chains") {
  MachineModel cpu = default_cpu_model();

  // Chain of 3 dependent fmul: 3 * 4 cycles.
  Region chain = tb::block(0, {
      tb::op(OpcodeClass::FpMul, "a", {"x", "y"}),
      tb::op(OpcodeClass::FpMul, "b", {"a", "a"}),
      tb::op(OpcodeClass::FpMul, "c", {"b", "a"}),
  });
  CHECK(critical_path_cycles(chain, cpu) == 12);

  // Independent instructions: longest single latency wins.
  CHECK(critical_path_cycles(independent_ialu(4), cpu) == 1);

  // A later rewrite of a register replaces its finish time.
  Region rewrite = tb::block(0, {
      tb::op(OpcodeClass::Div, "a"),           // finish 20
      tb::op(OpcodeClass::IntAlu, "a"),        // rewrites a, finish 1
      tb::op(OpcodeClass::IntAlu, "b", {"a"}),  // depends on the cheap writer
  });
  CHECK(critical_path_cycles(rewrite, cpu) == 20);  // the div still bounds the block

  // Instructions without dest still extend the path.
  Region tail = tb::block(0, {
      tb::op(OpcodeClass::FpAdd, "a"),
      tb::store("a", 64),
  });
  CHECK(critical_path_cycles(tail, cpu) == 4);  // 3 + 1

  CHECK(critical_path_cycles(tb::block(0, {}), cpu) == 0);
}

TEST_CASE("estimate_cycles is the max of throughput, port and path bounds") {
  MachineModel cpu = default_cpu_model();
  MachineModel pim = default_pim_model();

  // 4 independent ialu on a 4-wide machine: one cycle.
  CHECK(estimate_cycles(independent_ialu(4), cpu) == 1.0);
  // The same on a 1-wide machine: throughput-bound at 4.
  CHECK(estimate_cycles(independent_ialu(4), pim) == 4.0);
  // 9 uops / width 4 rounds up.
  CHECK(estimate_cycles(independent_ialu(9), cpu) == 3.0);

  // Port bound: 4 loads over 2 ports, but a 4-cycle load latency also binds.
  Region loads = tb::block(0, {
      tb::load("a", 0), tb::load("b", 64), tb::load("c", 128), tb::load("d", 192),
  });
  CHECK(estimate_cycles(loads, cpu) == 4.0);  // critical path (load latency)
  MachineModel fast_load = cpu;
  fast_load.latency[static_cast<int>(OpcodeClass::Load)] = 1;
  CHECK(estimate_cycles(loads, fast_load) == 2.0);  // now ceil(4/2) binds

  // Dependency chain dominates both bounds.
  Region chain = tb::block(0, {
      tb::op(OpcodeClass::FpMul, "a", {"x"}),
      tb::op(OpcodeClass::FpMul, "b", {"a"}),
      tb::op(OpcodeClass::FpMul, "c", {"b"}),
  });
  CHECK(estimate_cycles(chain, cpu) == 12.0);

  // Miss penalties are additive and accept fractional counts.
  CHECK(estimate_cycles(loads, cpu, 0.5) == 4.0 + 0.5 * 180);
  CHECK(estimate_cycles(loads, pim, 1.0) == 4.0 + 90);
}

TEST_CASE("estimate_cycles never drops when an instruction is appended") {
  MachineModel cpu = default_cpu_model();
  Region r = tb::block(0, {});
  double prev = 0;
  OpcodeClass mix[] = {OpcodeClass::IntAlu, OpcodeClass::Load, OpcodeClass::FpMul,
                       OpcodeClass::Store, OpcodeClass::Div, OpcodeClass::Branch};
  for (int i = 0; i < 30; ++i) {
    OpcodeClass op = mix[i % 6];
    if (op == OpcodeClass::Load) {
      r.instructions.push_back(tb::load("t" + std::to_string(i), 64 * i));
    } else if (op == OpcodeClass::Store) {
      r.instructions.push_back(tb::store("t" + std::to_string(i - 1), 64 * i));
    } else if (op == OpcodeClass::Branch) {
      r.instructions.push_back(tb::branch("t0"));
    } else {
      r.instructions.push_back(tb::op(op, "t" + std::to_string(i), {"t" + std::to_string(i / 2)}));
    }
    double now = estimate_cycles(r, cpu);
    CHECK(now >= prev);
    prev = now;
  }
}

TEST_CASE("port pressure saturates and vanishes per the formula") {
  MachineModel cpu = default_cpu_model();

  CHECK(port_pressure(independent_ialu(5), cpu) == 0.0);  // no memory ops

  // With a 1-cycle load the estimate is 2 and 4 loads keep both ports busy.
  MachineModel fast_load = cpu;
  fast_load.latency[static_cast<int>(OpcodeClass::Load)] = 1;
  Region loads = tb::block(0, {
      tb::load("a", 0), tb::load("b", 64), tb::load("c", 128), tb::load("d", 192),
  });
  CHECK(port_pressure(loads, fast_load) == 1.0);  // (4/2) / 2

  // One load among seven independent ialu: estimate 2, pressure (1/2)/2.
  Region sparse = independent_ialu(7);
  sparse.instructions.push_back(tb::load("x", 0));
  CHECK(port_pressure(sparse, fast_load) == 0.25);

  // Default load latency stretches the estimate, diluting pressure, and the
  // clamp keeps everything inside [0, 1].
  CHECK(port_pressure(loads, cpu) == 0.5);
  MachineModel one_port = cpu;
  one_port.ls_ports = 1;
  CHECK(port_pressure(loads, one_port) <= 1.0);
}

TEST_CASE("arithmetic intensity counts compute per memory op") {
  Region r = tb::block(0, {});
  for (int i = 0; i < 6; ++i) r.instructions.push_back(tb::op(OpcodeClass::IntAlu, "t"));
  r.instructions.push_back(tb::load("a", 0));
  r.instructions.push_back(tb::load("b", 64));
  CHECK(arithmetic_intensity(r) == 3.0);  // 6 compute / 2 mem

  Region mem_only = tb::block(0, {tb::load("a", 0)});
  for (int i = 0; i < 4; ++i) mem_only.instructions.push_back(tb::load("x", 64 * i));
  CHECK(arithmetic_intensity(mem_only) == 0.0);

  // Branches count toward neither side; denominator clamps at 1.
  Region branchy = tb::block(0, {tb::branch("a"), tb::branch("b")});
  CHECK(arithmetic_intensity(branchy) == 0.0);
  Region pure_compute = independent_ialu(5);
  CHECK(arithmetic_intensity(pure_compute) == 5.0);
}

TEST_CASE("analyze fills one metrics row per region") {
  Program p = tb::program({
      tb::block(0, {tb::op(OpcodeClass::Move, "a")}, 3),
      tb::block(1, {tb::load("x", 0), tb::op(OpcodeClass::IntAlu, "y", {"x"})}, 2, "main",
                true, 64),
      tb::block(2, {tb::op(OpcodeClass::IntAlu, "z")}, 1, "main", true, 8),
  });
  std::vector<RegionMetrics> ms = analyze(p, default_cpu_model(), default_pim_model());
  REQUIRE(ms.size() == 3);

  CHECK(ms[0].uop_count == 1);
  CHECK(ms[0].mem_op_count == 0);
  CHECK(ms[0].compute_op_count == 1);
  CHECK(ms[0].frequency == 3);
  CHECK_FALSE(ms[0].parallel_capable);

  CHECK(ms[1].mem_op_count == 1);
  CHECK(ms[1].parallel_capable);  // trip 64 covers the 32 PIM cores
  CHECK(ms[1].trip_count == 64);

  CHECK_FALSE(ms[2].parallel_capable);  // trip 8 does not
  CHECK(ms[2].misses_per_exec == 0.0);
}

TEST_CASE("analyze folds a miss profile into the cycle estimates") {
  Program p = tb::program({tb::block(0, {tb::load("a", 0)}, 10)});
  MissProfile profile{{0, 2.0}};
  std::vector<RegionMetrics> with = analyze(p, default_cpu_model(), default_pim_model(), &profile);
  std::vector<RegionMetrics> without = analyze(p, default_cpu_model(), default_pim_model());

  CHECK(with[0].misses_per_exec == 2.0);
  CHECK(with[0].est_cycles_cpu == without[0].est_cycles_cpu + 2.0 * 180);
  CHECK(with[0].est_cycles_pim == without[0].est_cycles_pim + 2.0 * 90);
}

TEST_CASE("instruction-parallel regions run no faster on the narrow machine") {
  // With equal latency tables and zero misses the 1-wide PIM can never beat
  // the 4-wide CPU on these blocks.
  MachineModel cpu = default_cpu_model();
  MachineModel pim = default_pim_model();
  pim.latency = cpu.latency;
  for (int n = 1; n <= 16; ++n) {
    Region r = independent_ialu(n);
    CHECK(estimate_cycles(r, pim) >= estimate_cycles(r, cpu));
  }
}
