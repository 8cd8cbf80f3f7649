#include "a3pim/ir.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace a3pim {

namespace {

constexpr const char* kOpcodeNames[kOpcodeClassCount] = {
    "ialu", "fadd", "fmul", "div", "load", "store", "br", "mov",
};

}  // namespace

const char* opcode_name(OpcodeClass op) {
  return kOpcodeNames[static_cast<int>(op)];
}

std::optional<OpcodeClass> opcode_from_name(std::string_view name) {
  for (int i = 0; i < kOpcodeClassCount; ++i) {
    if (name == kOpcodeNames[i]) return static_cast<OpcodeClass>(i);
  }
  return std::nullopt;
}

const Region* Program::find_region(uint32_t id) const {
  for (const Region& r : regions) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const Region& Program::region(uint32_t id) const {
  const Region* r = find_region(id);
  if (!r) throw std::out_of_range("unknown region id " + std::to_string(id));
  return *r;
}

uint64_t Program::total_instruction_count() const {
  uint64_t n = 0;
  for (const Region& r : regions) n += r.instructions.size();
  return n;
}

std::vector<CfgEdge> Trace::transition_counts() const {
  std::map<std::pair<uint32_t, uint32_t>, uint64_t> counts;
  for (size_t i = 1; i < events.size(); ++i) {
    counts[{events[i - 1].region_id, events[i].region_id}] += 1;
  }
  std::vector<CfgEdge> out;
  out.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    out.push_back({key.first, key.second, count});
  }
  return out;
}

ParseError::ParseError(std::string message, uint32_t line, uint32_t column)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) +
                                         (column == 0 ? "" : ":" + std::to_string(column)) +
                                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct LineLexer {
  std::string_view text;
  uint32_t line_no = 0;

  // Column of the token start within the current line, 1-based.
  uint32_t col = 0;

  std::string_view line;
  size_t pos = 0;

  bool next_line(std::string_view source, size_t& offset) {
    while (offset < source.size()) {
      size_t end = source.find('\n', offset);
      if (end == std::string_view::npos) end = source.size();
      line = source.substr(offset, end - offset);
      offset = end + 1;
      ++line_no;
      if (size_t hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      pos = 0;
      if (!peek_token().empty()) return true;  // skip blank/comment-only lines
    }
    return false;
  }

  std::string_view peek_token() {
    size_t p = pos;
    while (p < line.size() && (line[p] == ' ' || line[p] == '\t' || line[p] == '\r')) ++p;
    size_t e = p;
    while (e < line.size() && line[e] != ' ' && line[e] != '\t' && line[e] != '\r') ++e;
    return line.substr(p, e - p);
  }

  std::string_view take_token() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    col = static_cast<uint32_t>(pos) + 1;
    size_t e = pos;
    while (e < line.size() && line[e] != ' ' && line[e] != '\t' && line[e] != '\r') ++e;
    std::string_view tok = line.substr(pos, e - pos);
    pos = e;
    return tok;
  }

  bool at_end() { return peek_token().empty(); }
};

uint64_t parse_uint(std::string_view tok, const LineLexer& lex, const char* what) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(std::string("expected ") + what + ", got '" + std::string(tok) + "'",
                     lex.line_no, lex.col);
  }
  return value;
}

// Accepts "key=value" and returns value, or nullopt if the token has a
// different key.
std::optional<std::string_view> key_value(std::string_view tok, std::string_view key) {
  if (tok.size() > key.size() + 1 && tok.substr(0, key.size()) == key && tok[key.size()] == '=') {
    return tok.substr(key.size() + 1);
  }
  return std::nullopt;
}

std::vector<std::string> split_commas(std::string_view text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    if (end > start) out.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

Instruction parse_instruction(LineLexer& lex, OpcodeClass opcode) {
  Instruction instr;
  instr.opcode = opcode;
  while (!lex.at_end()) {
    std::string_view tok = lex.take_token();
    if (auto v = key_value(tok, "dst")) {
      if (instr.dest) throw ParseError("duplicate dst", lex.line_no, lex.col);
      instr.dest = std::string(*v);
    } else if (auto v = key_value(tok, "src")) {
      if (!instr.sources.empty()) throw ParseError("duplicate src", lex.line_no, lex.col);
      instr.sources = split_commas(*v);
    } else if (auto v = key_value(tok, "mem")) {
      if (instr.memory_ref) throw ParseError("duplicate mem", lex.line_no, lex.col);
      instr.memory_ref = parse_uint(*v, lex, "address");
    } else {
      throw ParseError("unexpected token '" + std::string(tok) + "'", lex.line_no, lex.col);
    }
  }
  const char* name = opcode_name(opcode);
  if (is_memory_op(opcode) && !instr.memory_ref) {
    throw ParseError(std::string(name) + " requires mem=<addr>", lex.line_no);
  }
  if (!is_memory_op(opcode) && instr.memory_ref) {
    throw ParseError(std::string("mem= not allowed on ") + name, lex.line_no);
  }
  if ((opcode == OpcodeClass::Store || opcode == OpcodeClass::Branch) && instr.dest) {
    throw ParseError(std::string(name) + " cannot have dst=", lex.line_no);
  }
  return instr;
}

void validate_edges(const Program& program) {
  std::unordered_map<uint32_t, const Region*> by_id;
  for (const Region& r : program.regions) by_id[r.id] = &r;

  std::unordered_map<uint32_t, uint64_t> out_count;
  std::unordered_map<uint32_t, std::unordered_set<uint32_t>> successors;
  for (const CfgEdge& e : program.cfg_edges) {
    if (!by_id.count(e.from)) {
      throw ParseError("edge references undefined region " + std::to_string(e.from));
    }
    if (!by_id.count(e.to)) {
      throw ParseError("edge references undefined region " + std::to_string(e.to));
    }
    out_count[e.from] += e.count;
    successors[e.from].insert(e.to);
  }
  // Sanity bound: a region executing f times can leave at most f times per
  // distinct successor.
  for (const auto& [id, total] : out_count) {
    uint64_t bound = by_id.at(id)->frequency * successors.at(id).size();
    if (total > bound) {
      throw ParseError("region " + std::to_string(id) + " has " + std::to_string(total) +
                       " outgoing transitions, which exceeds frequency x successors = " +
                       std::to_string(bound));
    }
  }
}

}  // namespace

Program parse_program(std::string_view text) {
  Program program;
  LineLexer lex;
  size_t offset = 0;

  struct FuncContext {
    std::string name;
    bool parallel = false;
    uint64_t trip = 0;
    bool valid = false;
  } func;

  std::unordered_set<uint32_t> seen_ids;
  Region* current_block = nullptr;

  while (lex.next_line(text, offset)) {
    std::string_view head = lex.take_token();
    if (head == "func") {
      std::string_view name = lex.take_token();
      if (name.empty()) throw ParseError("func requires a name", lex.line_no, lex.col);
      func = {std::string(name), false, 0, true};
      while (!lex.at_end()) {
        std::string_view tok = lex.take_token();
        if (tok == "parallel") {
          func.parallel = true;
        } else if (auto v = key_value(tok, "trip")) {
          func.trip = parse_uint(*v, lex, "trip count");
        } else {
          throw ParseError("unexpected token '" + std::string(tok) + "'", lex.line_no, lex.col);
        }
      }
      if (func.parallel && func.trip == 0) {
        throw ParseError("parallel func requires trip=<uint>", lex.line_no);
      }
      current_block = nullptr;
    } else if (head == "block") {
      if (!func.valid) throw ParseError("block outside of func", lex.line_no);
      Region region;
      region.id = static_cast<uint32_t>(parse_uint(lex.take_token(), lex, "block id"));
      region.kind = RegionKind::BasicBlock;
      region.parent_function = func.name;
      region.parallel = func.parallel;
      region.trip_count = func.trip;
      bool have_freq = false;
      while (!lex.at_end()) {
        std::string_view tok = lex.take_token();
        if (auto v = key_value(tok, "freq")) {
          region.frequency = parse_uint(*v, lex, "frequency");
          have_freq = true;
        } else {
          throw ParseError("unexpected token '" + std::string(tok) + "'", lex.line_no, lex.col);
        }
      }
      if (!have_freq) throw ParseError("block requires freq=<uint>", lex.line_no);
      if (!seen_ids.insert(region.id).second) {
        throw ParseError("duplicate region id " + std::to_string(region.id), lex.line_no);
      }
      program.regions.push_back(std::move(region));
      current_block = &program.regions.back();
    } else if (head == "edge") {
      uint32_t from = static_cast<uint32_t>(parse_uint(lex.take_token(), lex, "region id"));
      if (lex.take_token() != "->") throw ParseError("expected '->'", lex.line_no, lex.col);
      uint32_t to = static_cast<uint32_t>(parse_uint(lex.take_token(), lex, "region id"));
      std::string_view tok = lex.take_token();
      auto v = key_value(tok, "count");
      if (!v) throw ParseError("expected count=<uint>", lex.line_no, lex.col);
      uint64_t count = parse_uint(*v, lex, "count");
      if (!lex.at_end()) throw ParseError("trailing tokens after edge", lex.line_no);
      program.cfg_edges.push_back({from, to, count});
      current_block = nullptr;
    } else if (auto opcode = opcode_from_name(head)) {
      if (!current_block) throw ParseError("instruction outside of block", lex.line_no);
      current_block->instructions.push_back(parse_instruction(lex, *opcode));
    } else {
      throw ParseError("unknown directive '" + std::string(head) + "'", lex.line_no, 1);
    }
  }

  if (program.regions.empty()) throw ParseError("program has no regions");
  program.entry_region = program.regions.front().id;
  validate_edges(program);
  return program;
}

std::string serialize_program(const Program& program) {
  std::ostringstream out;
  const Region* prev = nullptr;
  for (const Region& r : program.regions) {
    if (!prev || prev->parent_function != r.parent_function || prev->parallel != r.parallel ||
        prev->trip_count != r.trip_count) {
      out << "func " << r.parent_function;
      if (r.parallel) out << " parallel trip=" << r.trip_count;
      out << "\n";
    }
    out << "block " << r.id << " freq=" << r.frequency << "\n";
    for (const Instruction& instr : r.instructions) {
      out << "  " << opcode_name(instr.opcode);
      if (instr.dest) out << " dst=" << *instr.dest;
      if (!instr.sources.empty()) {
        out << " src=";
        for (size_t i = 0; i < instr.sources.size(); ++i) {
          if (i) out << ",";
          out << instr.sources[i];
        }
      }
      if (instr.memory_ref) out << " mem=" << *instr.memory_ref;
      out << "\n";
    }
    prev = &r;
  }
  for (const CfgEdge& e : program.cfg_edges) {
    out << "edge " << e.from << " -> " << e.to << " count=" << e.count << "\n";
  }
  return out.str();
}

Trace parse_trace(std::string_view text, const Program& program) {
  std::unordered_map<uint32_t, uint64_t> expected;
  for (const Region& r : program.regions) expected[r.id] = r.frequency;

  Trace trace;
  std::unordered_map<uint32_t, uint64_t> seen;
  LineLexer lex;
  size_t offset = 0;
  while (lex.next_line(text, offset)) {
    std::string_view tok = lex.take_token();
    if (!lex.at_end()) throw ParseError("one event per line", lex.line_no);
    TraceEvent event;
    std::string_view id_part = tok;
    if (size_t colon = tok.find(':'); colon != std::string_view::npos) {
      id_part = tok.substr(0, colon);
      for (const std::string& a : split_commas(tok.substr(colon + 1))) {
        event.addresses.push_back(parse_uint(a, lex, "address"));
      }
    }
    event.region_id = static_cast<uint32_t>(parse_uint(id_part, lex, "region id"));
    auto it = expected.find(event.region_id);
    if (it == expected.end()) {
      throw ParseError("trace references unknown region " + std::to_string(event.region_id),
                       lex.line_no);
    }
    seen[event.region_id] += 1;
    trace.events.push_back(std::move(event));
  }

  for (const auto& [id, freq] : expected) {
    uint64_t got = seen.count(id) ? seen.at(id) : 0;
    if (got != freq) {
      throw ParseError("region " + std::to_string(id) + " appears " + std::to_string(got) +
                       " times in trace but has frequency " + std::to_string(freq));
    }
  }
  return trace;
}

std::string serialize_trace(const Trace& trace) {
  std::ostringstream out;
  for (const TraceEvent& event : trace.events) {
    out << event.region_id;
    if (!event.addresses.empty()) {
      out << ":";
      for (size_t i = 0; i < event.addresses.size(); ++i) {
        if (i) out << ",";
        out << event.addresses[i];
      }
    }
    out << "\n";
  }
  return out.str();
}

Program coarsen_to_functions(const Program& program) {
  bool all_functions = std::all_of(program.regions.begin(), program.regions.end(),
                                   [](const Region& r) { return r.kind == RegionKind::Function; });
  if (all_functions) return program;

  // Group members by parent function, preserving first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Region*>> groups;
  for (const Region& r : program.regions) {
    auto [it, inserted] = groups.try_emplace(r.parent_function);
    if (inserted) order.push_back(r.parent_function);
    it->second.push_back(&r);
  }

  Program out;
  std::unordered_map<uint32_t, uint32_t> region_to_function;
  for (const std::string& name : order) {
    std::vector<const Region*> members = groups.at(name);
    std::sort(members.begin(), members.end(),
              [](const Region* a, const Region* b) { return a->id < b->id; });
    Region merged;
    merged.id = members.front()->id;
    merged.kind = RegionKind::Function;
    merged.parent_function = name;
    for (const Region* m : members) {
      merged.instructions.insert(merged.instructions.end(), m->instructions.begin(),
                                 m->instructions.end());
      merged.frequency = std::max(merged.frequency, m->frequency);
      merged.parallel = merged.parallel || m->parallel;
      merged.trip_count = std::max(merged.trip_count, m->trip_count);
      region_to_function[m->id] = merged.id;
    }
    out.regions.push_back(std::move(merged));
  }

  std::map<std::pair<uint32_t, uint32_t>, uint64_t> collapsed;
  for (const CfgEdge& e : program.cfg_edges) {
    uint32_t from = region_to_function.at(e.from);
    uint32_t to = region_to_function.at(e.to);
    if (from == to) continue;
    collapsed[{from, to}] += e.count;
  }
  for (const auto& [key, count] : collapsed) {
    out.cfg_edges.push_back({key.first, key.second, count});
  }
  out.entry_region = region_to_function.at(program.entry_region);
  return out;
}

Trace coarsen_trace(const Trace& trace, const Program& block_program) {
  // Smallest region id per parent function, the id coarsening assigns.
  std::map<std::string, uint32_t> function_id;
  for (const Region& r : block_program.regions) {
    auto [it, inserted] = function_id.try_emplace(r.parent_function, r.id);
    if (!inserted) it->second = std::min(it->second, r.id);
  }
  Trace out;
  out.events.reserve(trace.events.size());
  for (const TraceEvent& event : trace.events) {
    TraceEvent mapped = event;
    mapped.region_id = function_id.at(block_program.region(event.region_id).parent_function);
    out.events.push_back(std::move(mapped));
  }
  return out;
}

}  // namespace a3pim
