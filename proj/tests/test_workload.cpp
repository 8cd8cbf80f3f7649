#include <map>
#include <set>
#include <string>

#include "a3pim/analyzer.hpp"
#include "a3pim/scheduler.hpp"
#include "a3pim/workload.hpp"
#include "doctest.h"

using namespace a3pim;

TEST_CASE("archetype names round-trip") {
  std::vector<Archetype> all = all_archetypes();
  REQUIRE(all.size() == 6);
  for (Archetype a : all) {
    auto back = archetype_from_name(archetype_name(a));
    REQUIRE(back.has_value());
    CHECK(*back == a);
  }
  CHECK(archetype_name(Archetype::GraphIrregular) == std::string("graph-irregular"));
  CHECK(archetype_name(Archetype::StreamingMemory) == std::string("streaming-memory"));
  CHECK(archetype_name(Archetype::ComputeDense) == std::string("compute-dense"));
  CHECK(archetype_name(Archetype::MixedPhase) == std::string("mixed-phase"));
  CHECK(archetype_name(Archetype::HashJoinLike) == std::string("hashjoin-like"));
  CHECK(archetype_name(Archetype::MlpLike) == std::string("mlp-like"));
  CHECK_FALSE(archetype_from_name("btree-like").has_value());
}

TEST_CASE("generation is deterministic for a fixed spec") {
  WorkloadSpec spec;
  spec.archetype = Archetype::GraphIrregular;
  spec.region_count = 9;
  spec.seed = 42;
  spec.sharing_density = 0.3;

  Workload a = generate(spec);
  Workload b = generate(spec);
  CHECK(serialize_program(a.program) == serialize_program(b.program));
  CHECK(serialize_trace(a.trace) == serialize_trace(b.trace));

  spec.seed = 43;
  Workload c = generate(spec);
  CHECK(serialize_trace(a.trace) != serialize_trace(c.trace));
}

TEST_CASE("every archetype emits a self-consistent, round-trippable workload") {
  for (Archetype a : all_archetypes()) {
    for (uint64_t seed : {1ULL, 7ULL, 99ULL}) {
      CAPTURE(archetype_name(a));
      CAPTURE(seed);
      WorkloadSpec spec;
      spec.archetype = a;
      spec.seed = seed;
      Workload w = generate(spec);

      REQUIRE_FALSE(w.program.regions.empty());
      REQUIRE_FALSE(w.trace.events.empty());

      // Text round-trip through the same parser the CLI uses.
      Program p2 = parse_program(serialize_program(w.program));
      CHECK(p2 == w.program);
      // parse_trace validates event counts against region frequencies.
      Trace t2 = parse_trace(serialize_trace(w.trace), w.program);
      CHECK(t2 == w.trace);

      // Edges are exactly the trace transitions and frequencies the event
      // counts.
      CHECK(w.program.cfg_edges == w.trace.transition_counts());
      std::map<uint32_t, uint64_t> counts;
      for (const TraceEvent& e : w.trace.events) counts[e.region_id] += 1;
      for (const Region& r : w.program.regions) {
        CHECK(r.frequency == counts[r.id]);
      }
    }
  }
}

TEST_CASE("region_count controls the number of regions") {
  for (Archetype a : all_archetypes()) {
    WorkloadSpec spec;
    spec.archetype = a;
    spec.region_count = 8;
    CHECK(generate(spec).program.regions.size() == 8);
  }
}

TEST_CASE("compute-dense blocks all have high arithmetic intensity") {
  WorkloadSpec spec;
  spec.archetype = Archetype::ComputeDense;
  spec.seed = 5;
  Workload w = generate(spec);
  std::vector<RegionMetrics> rows =
      analyze(w.program, default_cpu_model(), default_pim_model());
  for (const RegionMetrics& m : rows) {
    CHECK(m.arithmetic_intensity > 3.0);
  }
}

TEST_CASE("streaming-memory blocks are memory-bound") {
  WorkloadSpec spec;
  spec.archetype = Archetype::StreamingMemory;
  Workload w = generate(spec);
  std::vector<RegionMetrics> rows =
      analyze(w.program, default_cpu_model(), default_pim_model());
  for (const RegionMetrics& m : rows) {
    CHECK(m.arithmetic_intensity < 1.0);
  }
}

TEST_CASE("mixed-phase drives the two-stage pipeline to use both sides") {
  WorkloadSpec spec;
  spec.archetype = Archetype::MixedPhase;
  spec.seed = 7;
  Workload w = generate(spec);
  ToolkitConfig cfg;
  StrategyResult r = a3pim::a3pim(w.program, &w.trace, cfg, Granularity::BasicBlocks);
  std::set<Target> sides;
  for (const auto& [id, side] : r.schedule) sides.insert(side);
  CHECK(sides.size() == 2);
}

TEST_CASE("mlp-like couples layers through shared registers into one cluster") {
  WorkloadSpec spec;
  spec.archetype = Archetype::MlpLike;
  Workload w = generate(spec);
  ToolkitConfig cfg;
  StrategyResult r = a3pim::a3pim(w.program, &w.trace, cfg, Granularity::BasicBlocks);
  CHECK(r.clusters.clusters.size() < w.program.regions.size());
}

TEST_CASE("random programs stay small, valid and block-granular") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    uint32_t n = 1 + uint32_t(seed % 12);
    Workload w = random_program(seed, n);
    CAPTURE(seed);
    REQUIRE(w.program.regions.size() == n);

    std::set<std::string> funcs;
    for (const Region& r : w.program.regions) {
      CHECK(r.kind == RegionKind::BasicBlock);
      funcs.insert(r.parent_function);
    }
    // One region per function keeps bbls and func granularity aligned.
    CHECK(funcs.size() == n);

    CHECK(parse_program(serialize_program(w.program)) == w.program);
    CHECK(parse_trace(serialize_trace(w.trace), w.program) == w.trace);
    CHECK(w.program.cfg_edges == w.trace.transition_counts());
  }
  CHECK_THROWS_AS(random_program(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(random_program(1, 13), std::invalid_argument);
}

TEST_CASE("random programs are deterministic per seed") {
  Workload a = random_program(11, 6);
  Workload b = random_program(11, 6);
  CHECK(a.program == b.program);
  CHECK(a.trace == b.trace);
}
