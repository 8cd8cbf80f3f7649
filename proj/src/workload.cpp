#include "a3pim/workload.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

namespace a3pim {

namespace {

constexpr uint64_t kLine = 64;

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t below(uint64_t n) { return n == 0 ? 0 : eng_() % n; }
  uint64_t range(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 eng_;
};

Instruction make_load(std::string dst, uint64_t addr, std::vector<std::string> srcs = {}) {
  Instruction i;
  i.opcode = OpcodeClass::Load;
  i.dest = std::move(dst);
  i.sources = std::move(srcs);
  i.memory_ref = addr;
  return i;
}

Instruction make_store(std::string src, uint64_t addr) {
  Instruction i;
  i.opcode = OpcodeClass::Store;
  i.sources = {std::move(src)};
  i.memory_ref = addr;
  return i;
}

Instruction make_compute(OpcodeClass op, std::string dst, std::vector<std::string> srcs) {
  Instruction i;
  i.opcode = op;
  i.dest = std::move(dst);
  i.sources = std::move(srcs);
  return i;
}

Instruction make_branch(std::string src) {
  Instruction i;
  i.opcode = OpcodeClass::Branch;
  i.sources = {std::move(src)};
  return i;
}

std::vector<uint64_t> line_pool(uint64_t first_line, size_t count) {
  std::vector<uint64_t> pool;
  pool.reserve(count);
  for (size_t k = 0; k < count; ++k) pool.push_back((first_line + k) * kLine);
  return pool;
}

std::vector<uint64_t> sample_addrs(Rng& rng, const std::vector<uint64_t>& pool, size_t k) {
  std::vector<uint64_t> copy = pool;
  size_t take = std::min(k, copy.size());
  for (size_t i = 0; i < take; ++i) {
    std::swap(copy[i], copy[i + rng.below(copy.size() - i)]);
  }
  copy.resize(take);
  return copy;
}

/// A visit order covering every region at least once, then `extra` random
/// steps.
std::vector<uint32_t> random_walk(Rng& rng, uint32_t n, size_t extra) {
  std::vector<uint32_t> order(n);
  for (uint32_t i = 0; i < n; ++i) order[i] = i;
  for (uint32_t i = 0; i < n; ++i) {
    std::swap(order[i], order[i + rng.below(n - i)]);
  }
  for (size_t s = 0; s < extra; ++s) order.push_back(static_cast<uint32_t>(rng.below(n)));
  return order;
}

/// Frequencies from event counts, edges from trace transitions.
Workload finalize(std::vector<Region> regions, Trace trace) {
  std::map<uint32_t, uint64_t> counts;
  for (const TraceEvent& e : trace.events) counts[e.region_id] += 1;
  for (Region& r : regions) {
    auto it = counts.find(r.id);
    r.frequency = it == counts.end() ? 0 : it->second;
  }
  Workload w;
  w.program.regions = std::move(regions);
  w.program.cfg_edges = trace.transition_counts();
  w.program.entry_region = w.program.regions.front().id;
  w.trace = std::move(trace);
  return w;
}

uint64_t wide_addr(Rng& rng) { return (0x40000 + rng.below(1 << 18)) * kLine; }

std::string reg(std::string_view prefix, uint64_t a, uint64_t b) {
  return std::string(prefix) + std::to_string(a) + "_" + std::to_string(b);
}

// Two loops in one function: a compute phase over shared registers, then a
// memory phase hammering uncached lines, with a single transition between
// them. The phases share nothing, so clustering splits exactly there.
Workload gen_mixed_phase(const WorkloadSpec& spec) {
  Rng rng(spec.seed);
  uint32_t n = std::max<uint32_t>(2, spec.region_count);
  uint32_t nc = n / 2;
  uint32_t nm = n - nc;

  std::vector<std::string> cregs;
  for (int k = 0; k < 6; ++k) cregs.push_back("cr" + std::to_string(k));
  std::vector<std::string> mregs;
  for (int k = 0; k < 6; ++k) mregs.push_back("mr" + std::to_string(k));
  std::vector<uint64_t> mpool = line_pool(0x4000, 24);

  std::vector<Region> regions;
  for (uint32_t i = 0; i < nc; ++i) {
    Region r;
    r.id = i;
    r.parent_function = "main";
    for (int k = 0; k < 15; ++k) {
      OpcodeClass op = k % 3 == 0   ? OpcodeClass::IntAlu
                       : k % 3 == 1 ? OpcodeClass::FpAdd
                                    : OpcodeClass::FpMul;
      r.instructions.push_back(make_compute(
          op, reg("t", i, k), {cregs[rng.below(6)], cregs[rng.below(6)]}));
    }
    r.instructions.push_back(make_branch(reg("t", i, 0)));
    regions.push_back(std::move(r));
  }
  for (uint32_t j = 0; j < nm; ++j) {
    Region r;
    r.id = nc + j;
    r.parent_function = "main";
    std::vector<uint64_t> addrs = sample_addrs(rng, mpool, 12);
    for (int k = 0; k < 12; ++k) {
      r.instructions.push_back(make_load(reg("m", j, k), addrs[k], {mregs[k % 6]}));
    }
    for (int k = 0; k < 3; ++k) {
      r.instructions.push_back(make_compute(
          OpcodeClass::IntAlu, reg("ma", j, k), {reg("m", j, k), reg("m", j, k + 3)}));
    }
    r.instructions.push_back(make_branch(reg("ma", j, 0)));
    regions.push_back(std::move(r));
  }

  Trace trace;
  for (int round = 0; round < 256; ++round) {
    for (uint32_t i = 0; i < nc; ++i) trace.events.push_back({i, {}});
  }
  for (int round = 0; round < 64; ++round) {
    for (uint32_t j = 0; j < nm; ++j) {
      TraceEvent e;
      e.region_id = nc + j;
      for (int k = 0; k < 12; ++k) e.addresses.push_back(wide_addr(rng));
      trace.events.push_back(std::move(e));
    }
  }
  return finalize(std::move(regions), std::move(trace));
}

// Irregular control flow over parallel memory-chasing blocks and serial
// compute blocks. A small hot pool stays cached and is the only data both
// sides touch.
Workload gen_graph_irregular(const WorkloadSpec& spec) {
  Rng rng(spec.seed);
  uint32_t n = std::max<uint32_t>(3, spec.region_count);
  std::vector<uint64_t> hot = line_pool(0x8000, 32);

  std::vector<Region> regions;
  for (uint32_t i = 0; i < n; ++i) {
    Region r;
    r.id = i;
    r.parent_function = "g" + std::to_string(i);
    bool compute_role = i % 3 == 2;
    if (compute_role) {
      r.instructions.push_back(
          make_load(reg("g", i, 0), hot[rng.below(hot.size())]));
      // Wide and flat: width-bound on the CPU, serialized on PIM.
      for (int k = 1; k < 15; ++k) {
        OpcodeClass op = k % 2 ? OpcodeClass::FpMul : OpcodeClass::IntAlu;
        r.instructions.push_back(make_compute(
            op, reg("g", i, k), {reg("gin", i, k % 2), reg("gin", i, 2 + k % 3)}));
      }
      r.instructions.push_back(make_branch(reg("g", i, 14)));
    } else {
      for (int k = 0; k < 10; ++k) {
        uint64_t addr = rng.chance(spec.sharing_density)
                            ? hot[rng.below(hot.size())]
                            : (0x10000 + uint64_t{i} * 64 + rng.below(16)) * kLine;
        r.instructions.push_back(make_load(reg("g", i, k), addr, {reg("gx", i, k % 2)}));
      }
      for (int k = 0; k < 2; ++k) {
        r.instructions.push_back(
            make_store(reg("g", i, k), (0x10000 + uint64_t{i} * 64 + 16 + k) * kLine));
      }
      for (int k = 0; k < 3; ++k) {
        r.instructions.push_back(make_compute(
            OpcodeClass::IntAlu, reg("ga", i, k), {reg("g", i, k), reg("g", i, k + 4)}));
      }
      r.instructions.push_back(make_branch(reg("ga", i, 0)));
      r.parallel = true;
      r.trip_count = 64;
    }
    regions.push_back(std::move(r));
  }

  Trace trace;
  for (uint32_t id : random_walk(rng, n, size_t{15} * n)) {
    TraceEvent e;
    e.region_id = id;
    if (id % 3 == 2) {
      e.addresses.push_back(hot[rng.below(hot.size())]);
    } else {
      for (int k = 0; k < 12; ++k) {
        e.addresses.push_back(rng.chance(spec.sharing_density) ? hot[rng.below(hot.size())]
                                                               : wide_addr(rng));
      }
    }
    trace.events.push_back(std::move(e));
  }
  return finalize(std::move(regions), std::move(trace));
}

// Parallel sequential scans over disjoint ranges; every access is a
// compulsory miss. Adjacent blocks share the boundary lines of their static
// ranges.
Workload gen_streaming_memory(const WorkloadSpec& spec) {
  Rng rng(spec.seed);
  uint32_t n = std::max<uint32_t>(1, spec.region_count);

  std::vector<Region> regions;
  for (uint32_t i = 0; i < n; ++i) {
    Region r;
    r.id = i;
    r.parent_function = "s" + std::to_string(i);
    r.parallel = true;
    r.trip_count = 64;
    for (int k = 0; k < 10; ++k) {
      r.instructions.push_back(
          make_load(reg("s", i, k), (0x2000 + uint64_t{i} * 6 + k) * kLine, {reg("sx", i, k % 2)}));
    }
    for (int k = 0; k < 2; ++k) {
      r.instructions.push_back(make_store(reg("s", i, k), (0x3000 + uint64_t{i} * 6 + k) * kLine));
    }
    for (int k = 0; k < 3; ++k) {
      r.instructions.push_back(make_compute(
          OpcodeClass::FpAdd, reg("sa", i, k), {reg("s", i, k), reg("s", i, k + 4)}));
    }
    r.instructions.push_back(make_branch(reg("sa", i, 0)));
    regions.push_back(std::move(r));
  }

  Trace trace;
  uint64_t cursor = 0x100000;
  for (int round = 0; round < 12; ++round) {
    for (uint32_t i = 0; i < n; ++i) {
      TraceEvent e;
      e.region_id = i;
      for (int k = 0; k < 12; ++k) e.addresses.push_back(cursor++ * kLine);
      trace.events.push_back(std::move(e));
    }
  }
  (void)rng;
  return finalize(std::move(regions), std::move(trace));
}

// High arithmetic intensity everywhere, a tiny resident footprint, no
// parallel loops: the CPU should win every region.
Workload gen_compute_dense(const WorkloadSpec& spec) {
  Rng rng(spec.seed);
  uint32_t n = std::max<uint32_t>(1, spec.region_count);
  std::vector<uint64_t> pool = line_pool(0x1000, 8);
  std::vector<std::string> dregs;
  for (int k = 0; k < 8; ++k) dregs.push_back("dr" + std::to_string(k));

  std::vector<Region> regions;
  for (uint32_t i = 0; i < n; ++i) {
    Region r;
    r.id = i;
    r.parent_function = "d" + std::to_string(i);
    uint64_t mem = rng.below(3);
    for (uint64_t k = 0; k < mem; ++k) {
      r.instructions.push_back(make_load(reg("d", i, k), pool[rng.below(pool.size())]));
    }
    uint64_t compute = 15 + rng.below(6);
    for (uint64_t k = 0; k < compute; ++k) {
      // Short-latency ops only, so the issue width is the binding limit.
      static constexpr OpcodeClass kOps[] = {OpcodeClass::IntAlu, OpcodeClass::FpAdd,
                                             OpcodeClass::FpMul};
      OpcodeClass op = kOps[rng.below(3)];
      r.instructions.push_back(make_compute(op, reg("dt", i, k),
                                            {dregs[rng.below(8)], dregs[rng.below(8)]}));
    }
    r.instructions.push_back(make_branch(reg("dt", i, 0)));
    regions.push_back(std::move(r));
  }

  Trace trace;
  for (uint32_t id : random_walk(rng, n, size_t{7} * n)) {
    TraceEvent e;
    e.region_id = id;
    for (const Instruction& instr : regions[id].instructions) {
      if (instr.memory_ref) e.addresses.push_back(*instr.memory_ref);
    }
    trace.events.push_back(std::move(e));
  }
  return finalize(std::move(regions), std::move(trace));
}

// Build and probe phases hitting a wide hash table, plus a hot hashing
// kernel that is pure compute. PIM-only pays for the kernel; a split does
// not.
Workload gen_hashjoin_like(const WorkloadSpec& spec) {
  Rng rng(spec.seed);
  uint32_t n = std::max<uint32_t>(4, spec.region_count);
  std::vector<uint64_t> htable = line_pool(0xC000, 24);

  // Three phases: build scatters into the table, the hash kernel is pure
  // integer arithmetic, probe gathers. Roles by index so every size gets all
  // three: i % 4 == 0 kernel, == 3 build, else probe.
  std::vector<Region> regions;
  for (uint32_t i = 0; i < n; ++i) {
    Region r;
    r.id = i;
    r.parent_function = "h" + std::to_string(i);
    uint32_t role = i % 4;
    if (role == 0) {  // hash kernel: flat integer mixing
      for (int k = 0; k < 16; ++k) {
        r.instructions.push_back(make_compute(
            OpcodeClass::IntAlu, reg("hk", i, k),
            {"kin" + std::to_string(k % 3), "kin" + std::to_string(3 + k % 3)}));
      }
      r.instructions.push_back(make_branch(reg("hk", i, 15)));
    } else if (role == 3) {  // build side: scatter stores
      for (int k = 0; k < 2; ++k) {
        r.instructions.push_back(
            make_load(reg("h", i, k), htable[rng.below(htable.size())],
                      {"bin" + std::to_string(k % 4)}));
      }
      for (int k = 0; k < 4; ++k) {
        r.instructions.push_back(make_compute(
            OpcodeClass::IntAlu, reg("hb", i, k), {reg("h", i, k % 2), reg("h", i, (k + 1) % 2)}));
      }
      for (int k = 0; k < 8; ++k) {
        uint64_t addr = rng.chance(spec.sharing_density)
                            ? htable[rng.below(htable.size())]
                            : (0x14000 + uint64_t{i} * 64 + rng.below(16)) * kLine;
        r.instructions.push_back(make_store(reg("hb", i, k % 4), addr));
      }
      r.instructions.push_back(make_branch(reg("hb", i, 0)));
    } else {  // probe side: gather loads
      for (int k = 0; k < 12; ++k) {
        uint64_t addr = rng.chance(spec.sharing_density)
                            ? htable[rng.below(htable.size())]
                            : (0x18000 + uint64_t{i} * 64 + rng.below(16)) * kLine;
        r.instructions.push_back(
            make_load(reg("h", i, k), addr, {"pin" + std::to_string(k % 4)}));
      }
      for (int k = 0; k < 3; ++k) {
        r.instructions.push_back(make_compute(
            OpcodeClass::IntAlu, reg("hp", i, k), {reg("h", i, k), reg("h", i, k + 4)}));
      }
      r.instructions.push_back(make_branch(reg("hp", i, 0)));
    }
    regions.push_back(std::move(r));
  }

  std::vector<uint32_t> build_ids, kernel_ids, probe_ids;
  for (uint32_t i = 0; i < n; ++i) {
    if (i % 4 == 0) kernel_ids.push_back(i);
    else if (i % 4 == 3) build_ids.push_back(i);
    else probe_ids.push_back(i);
  }

  Trace trace;
  auto emit_mem_event = [&](uint32_t id, int refs) {
    TraceEvent e;
    e.region_id = id;
    for (int k = 0; k < refs; ++k) {
      e.addresses.push_back(rng.chance(spec.sharing_density)
                                ? htable[rng.below(htable.size())]
                                : wide_addr(rng));
    }
    trace.events.push_back(std::move(e));
  };
  for (int round = 0; round < 32; ++round) {
    for (uint32_t id : build_ids) emit_mem_event(id, 10);
  }
  for (int round = 0; round < 96; ++round) {
    for (uint32_t id : kernel_ids) {
      TraceEvent e;
      e.region_id = id;
      trace.events.push_back(std::move(e));
    }
  }
  for (int round = 0; round < 32; ++round) {
    for (uint32_t id : probe_ids) emit_mem_event(id, 12);
  }
  return finalize(std::move(regions), std::move(trace));
}

// Alternating weight-streaming and dense-arithmetic layers.
Workload gen_mlp_like(const WorkloadSpec& spec) {
  Rng rng(spec.seed);
  uint32_t n = std::max<uint32_t>(2, spec.region_count);
  std::vector<uint64_t> act = line_pool(0xE000, 16);

  std::vector<Region> regions;
  for (uint32_t i = 0; i < n; ++i) {
    Region r;
    r.id = i;
    r.parent_function = "l" + std::to_string(i);
    // Both roles read the shared activation registers a0..a5, which is what
    // couples consecutive layers into one cluster.
    if (i % 2 == 0) {  // dense arithmetic over activations
      for (int k = 0; k < 2; ++k) {
        r.instructions.push_back(make_load(reg("l", i, k), act[rng.below(act.size())],
                                           {"a" + std::to_string(k % 6)}));
      }
      for (int k = 2; k < 20; ++k) {
        OpcodeClass op = k % 2 ? OpcodeClass::FpMul : OpcodeClass::FpAdd;
        r.instructions.push_back(make_compute(
            op, reg("l", i, k),
            {"a" + std::to_string(k % 6), "a" + std::to_string((k + 2) % 6)}));
      }
      r.instructions.push_back(make_branch(reg("l", i, 19)));
    } else {  // weight streaming, writes the next activation slab
      r.parallel = true;
      r.trip_count = 64;
      for (int k = 0; k < 12; ++k) {
        r.instructions.push_back(make_load(
            reg("l", i, k), (0x1C000 + uint64_t{i} * 16 + rng.below(16)) * kLine,
            {"a" + std::to_string(k % 6)}));
      }
      for (int k = 0; k < 2; ++k) {
        r.instructions.push_back(make_compute(
            OpcodeClass::FpAdd, reg("la", i, k), {reg("l", i, k), reg("l", i, k + 4)}));
      }
      for (int k = 0; k < 2; ++k) {
        r.instructions.push_back(
            make_store(reg("la", i, k), act[rng.below(act.size())]));
      }
      r.instructions.push_back(make_branch(reg("la", i, 0)));
    }
    regions.push_back(std::move(r));
  }

  // Layers execute in order; arithmetic layers run three passes per round.
  Trace trace;
  uint64_t cursor = 0x200000;
  for (int round = 0; round < 16; ++round) {
    for (uint32_t i = 0; i < n; ++i) {
      int repeats = i % 2 == 0 ? 3 : 1;
      for (int rep = 0; rep < repeats; ++rep) {
        TraceEvent e;
        e.region_id = i;
        if (i % 2 == 0) {
          e.addresses.push_back(act[rng.below(act.size())]);
          e.addresses.push_back(act[rng.below(act.size())]);
        } else {
          for (int k = 0; k < 12; ++k) e.addresses.push_back(cursor++ * kLine);
        }
        trace.events.push_back(std::move(e));
      }
    }
  }
  return finalize(std::move(regions), std::move(trace));
}

}  // namespace

const char* archetype_name(Archetype a) {
  switch (a) {
    case Archetype::GraphIrregular: return "graph-irregular";
    case Archetype::StreamingMemory: return "streaming-memory";
    case Archetype::ComputeDense: return "compute-dense";
    case Archetype::MixedPhase: return "mixed-phase";
    case Archetype::HashJoinLike: return "hashjoin-like";
    case Archetype::MlpLike: return "mlp-like";
  }
  return "?";
}

std::optional<Archetype> archetype_from_name(std::string_view name) {
  for (Archetype a : all_archetypes()) {
    if (name == archetype_name(a)) return a;
  }
  return std::nullopt;
}

std::vector<Archetype> all_archetypes() {
  return {Archetype::GraphIrregular, Archetype::StreamingMemory, Archetype::ComputeDense,
          Archetype::MixedPhase,     Archetype::HashJoinLike,    Archetype::MlpLike};
}

Workload generate(const WorkloadSpec& spec) {
  if (spec.region_count == 0) throw std::invalid_argument("region_count must be >= 1");
  if (spec.sharing_density < 0 || spec.sharing_density > 1) {
    throw std::invalid_argument("sharing_density must be in [0, 1]");
  }
  switch (spec.archetype) {
    case Archetype::GraphIrregular: return gen_graph_irregular(spec);
    case Archetype::StreamingMemory: return gen_streaming_memory(spec);
    case Archetype::ComputeDense: return gen_compute_dense(spec);
    case Archetype::MixedPhase: return gen_mixed_phase(spec);
    case Archetype::HashJoinLike: return gen_hashjoin_like(spec);
    case Archetype::MlpLike: return gen_mlp_like(spec);
  }
  throw std::logic_error("unreachable archetype");
}

Workload random_program(uint64_t seed, uint32_t region_count) {
  if (region_count < 1 || region_count > 12) {
    throw std::invalid_argument("region_count must be in [1, 12]");
  }
  Rng rng(seed);
  uint32_t n = region_count;

  // Blocks come in contiguous same-kind runs, the shape loops and pipeline
  // stages leave behind. Kinds differ in how much arithmetic rides on each
  // memory access, so placement decisions play out per run, not per block.
  enum class Flavor { Compute, Thrash, Hot, ParallelLoop };
  auto phase_count = static_cast<uint32_t>(1 + rng.below(std::min<uint32_t>(4, n)));
  std::vector<uint32_t> phase_size(phase_count, 1);
  for (uint32_t left = n - phase_count; left > 0; --left) {
    phase_size[rng.below(phase_count)] += 1;
  }

  uint64_t base_freq = std::max<uint64_t>(4, 48 / n);
  uint64_t fresh_line = 0x100000;

  std::vector<Region> regions;
  std::vector<Flavor> flavor_of(n, Flavor::Compute);
  std::vector<uint64_t> freq_of(n, 0);
  std::vector<std::vector<uint32_t>> phase_blocks(phase_count);
  uint32_t next_id = 0;
  for (uint32_t p = 0; p < phase_count; ++p) {
    uint64_t roll = rng.below(100);
    Flavor flavor = roll < 30   ? Flavor::Compute
                    : roll < 60 ? Flavor::Thrash
                    : roll < 80 ? Flavor::Hot
                                : Flavor::ParallelLoop;
    // Every stride-th source reads a register the whole run shares, which
    // is what makes same-run blocks attractive to merge.
    uint64_t stride = 2 + rng.below(6);
    for (uint32_t k = 0; k < phase_size[p]; ++k, ++next_id) {
      uint32_t i = next_id;
      Region r;
      r.id = i;
      r.parent_function = "f" + std::to_string(i);
      uint64_t freq = base_freq + rng.below(base_freq + 1);
      auto src = [&](uint64_t s) {
        return s % stride == 0 ? reg("p", p, s % 3) : reg("c", i, s % 4);
      };
      switch (flavor) {
        case Flavor::Compute: {
          uint64_t ops = 96 + rng.below(97);
          for (uint64_t s = 0; s < ops; ++s) {
            OpcodeClass op = s % 7 == 6   ? OpcodeClass::FpMul
                             : s % 5 == 4 ? OpcodeClass::FpAdd
                                          : OpcodeClass::IntAlu;
            r.instructions.push_back(make_compute(op, reg("t", i, s), {src(s), src(s + 1)}));
          }
          break;
        }
        case Flavor::Thrash: {
          uint64_t loads = 6 + rng.below(5);
          for (uint64_t s = 0; s < loads; ++s) {
            r.instructions.push_back(
                make_load(reg("t", i, s), (0x30000 + uint64_t{i} * 32 + s) * kLine));
          }
          uint64_t alus = rng.below(3);
          for (uint64_t s = 0; s < alus; ++s) {
            r.instructions.push_back(make_compute(OpcodeClass::IntAlu, reg("u", i, s),
                                                  {src(s), reg("c", i, (s + 1) % 4)}));
          }
          break;
        }
        case Flavor::Hot: {
          freq *= 3;
          uint64_t line = 0x8000 * kLine;
          uint64_t loads = 2 + rng.below(2);
          for (uint64_t s = 0; s < loads; ++s) {
            r.instructions.push_back(make_load(reg("t", i, 200 + s), line));
          }
          uint64_t alus = 48 + rng.below(33);
          for (uint64_t s = 0; s < alus; ++s) {
            OpcodeClass op = s % 6 == 5 ? OpcodeClass::FpMul : OpcodeClass::IntAlu;
            r.instructions.push_back(make_compute(op, reg("t", i, s), {src(s), src(s + 1)}));
          }
          break;
        }
        case Flavor::ParallelLoop: {
          r.parallel = true;
          r.trip_count = uint64_t{32} << rng.below(3);
          uint64_t ops = 192 + rng.below(193);
          for (uint64_t s = 0; s < ops; ++s) {
            OpcodeClass op = s % 4 == 3 ? OpcodeClass::FpAdd : OpcodeClass::IntAlu;
            r.instructions.push_back(make_compute(op, reg("t", i, s), {src(s), src(s + 1)}));
          }
          break;
        }
      }
      r.instructions.push_back(make_branch(src(0)));
      flavor_of[i] = flavor;
      freq_of[i] = freq;
      phase_blocks[p].push_back(i);
      regions.push_back(std::move(r));
    }
  }

  // Executions interleave freely inside a run; runs follow each other once.
  // Hot blocks replay their resident lines, thrashing blocks stream over
  // never-repeated ones.
  Trace trace;
  for (uint32_t p = 0; p < phase_count; ++p) {
    std::vector<uint32_t> visits;
    for (uint32_t id : phase_blocks[p]) {
      for (uint64_t v = 0; v < freq_of[id]; ++v) visits.push_back(id);
    }
    for (size_t v = 0; v + 1 < visits.size(); ++v) {
      std::swap(visits[v], visits[v + rng.below(visits.size() - v)]);
    }
    for (uint32_t id : visits) {
      TraceEvent e;
      e.region_id = id;
      if (flavor_of[id] == Flavor::Hot) {
        for (const Instruction& instr : regions[id].instructions) {
          if (instr.memory_ref) e.addresses.push_back(*instr.memory_ref);
        }
      } else if (flavor_of[id] == Flavor::Thrash) {
        for (int a = 0; a < 4; ++a) e.addresses.push_back((fresh_line++) * kLine);
      }
      trace.events.push_back(std::move(e));
    }
  }
  return finalize(std::move(regions), std::move(trace));
}

}  // namespace a3pim
