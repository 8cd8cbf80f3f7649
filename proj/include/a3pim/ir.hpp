#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace a3pim {

/// Instruction vocabulary. Eight classes are enough to distinguish integer
/// and floating-point compute, long-latency division, the two memory
/// directions, control flow and register moves.
enum class OpcodeClass : uint8_t {
  IntAlu,
  FpAdd,
  FpMul,
  Div,
  Load,
  Store,
  Branch,
  Move,
};

inline constexpr int kOpcodeClassCount = 8;

const char* opcode_name(OpcodeClass op);
std::optional<OpcodeClass> opcode_from_name(std::string_view name);

inline bool is_memory_op(OpcodeClass op) {
  return op == OpcodeClass::Load || op == OpcodeClass::Store;
}

/// Compute ops are everything except memory accesses and branches.
inline bool is_compute_op(OpcodeClass op) {
  return !is_memory_op(op) && op != OpcodeClass::Branch;
}

struct Instruction {
  OpcodeClass opcode = OpcodeClass::IntAlu;
  std::optional<std::string> dest;
  std::vector<std::string> sources;
  /// Static byte address. Present iff opcode is Load or Store.
  std::optional<uint64_t> memory_ref;

  bool operator==(const Instruction&) const = default;
};

enum class RegionKind : uint8_t { BasicBlock, Function };

/// The unit of profiling and offloading: a basic block, or a whole function
/// when the granularity has been coarsened.
struct Region {
  uint32_t id = 0;
  RegionKind kind = RegionKind::BasicBlock;
  std::vector<Instruction> instructions;
  std::string parent_function;
  uint64_t frequency = 0;  // executions recorded in the profile
  bool parallel = false;
  uint64_t trip_count = 0;  // iterations of the enclosing parallel loop, 0 if none

  bool operator==(const Region&) const = default;
};

struct CfgEdge {
  uint32_t from = 0;
  uint32_t to = 0;
  uint64_t count = 0;

  bool operator==(const CfgEdge&) const = default;
};

struct Program {
  std::vector<Region> regions;
  std::vector<CfgEdge> cfg_edges;
  uint32_t entry_region = 0;

  bool operator==(const Program&) const = default;

  const Region* find_region(uint32_t id) const;
  /// Throws std::out_of_range for an unknown id.
  const Region& region(uint32_t id) const;
  uint64_t total_instruction_count() const;
};

struct TraceEvent {
  uint32_t region_id = 0;
  std::vector<uint64_t> addresses;

  bool operator==(const TraceEvent&) const = default;
};

/// Ordered record of dynamic region executions and the byte addresses each
/// execution touched.
struct Trace {
  std::vector<TraceEvent> events;

  bool operator==(const Trace&) const = default;

  /// Counts of adjacent (from, to) event pairs, ordered by (from, to).
  std::vector<CfgEdge> transition_counts() const;
};

/// Load error with a 1-based source position; 0 means unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, uint32_t line = 0, uint32_t column = 0);

  uint32_t line() const { return line_; }
  uint32_t column() const { return column_; }

 private:
  uint32_t line_ = 0;
  uint32_t column_ = 0;
};

Program parse_program(std::string_view text);
std::string serialize_program(const Program& program);

Trace parse_trace(std::string_view text, const Program& program);
std::string serialize_trace(const Trace& trace);

/// Coarsens basic-block regions into one Function-kind region per parent
/// function: instructions concatenated in member-id order, frequency = max of
/// members, parallel flag OR-ed, trip count = max, intra-function edges
/// dropped and inter-function edge counts summed. The new region keeps the
/// smallest member id. A program that is already all Function-kind is
/// returned unchanged.
Program coarsen_to_functions(const Program& program);

/// Rewrites each event's region id to the id its region gets after
/// coarsen_to_functions(block_program). Event order and addresses are kept.
Trace coarsen_trace(const Trace& trace, const Program& block_program);

}  // namespace a3pim
