#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "a3pim/ir.hpp"

namespace a3pim {

enum class Archetype : uint8_t {
  GraphIrregular,
  StreamingMemory,
  ComputeDense,
  MixedPhase,
  HashJoinLike,
  MlpLike,
};

const char* archetype_name(Archetype a);
std::optional<Archetype> archetype_from_name(std::string_view name);
std::vector<Archetype> all_archetypes();

struct WorkloadSpec {
  Archetype archetype = Archetype::MixedPhase;
  uint32_t region_count = 12;
  uint64_t seed = 1;
  /// Probability that a memory reference draws from the workload's shared
  /// pool, in archetypes that have one (graph-irregular, hashjoin-like).
  /// The phase/layer archetypes encode their sharing structurally.
  double sharing_density = 0.1;
};

struct Workload {
  Program program;
  Trace trace;
};

/// Deterministic synthetic program plus a consistent trace: event counts
/// match region frequencies and CFG edges match trace transitions.
Workload generate(const WorkloadSpec& spec);

/// Uniformly random small program for enumeration-oracle and property tests.
/// One region per function, so block and function granularities coincide.
/// region_count must be in [1, 12].
Workload random_program(uint64_t seed, uint32_t region_count);

}  // namespace a3pim
