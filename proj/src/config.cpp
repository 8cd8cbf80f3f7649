#include "a3pim/config.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace a3pim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

uint64_t parse_u64(std::string_view value, uint32_t line) {
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ParseError("expected an unsigned integer, got '" + std::string(value) + "'", line);
  }
  return out;
}

uint32_t parse_u32(std::string_view value, uint32_t line) {
  uint64_t out = parse_u64(value, line);
  if (out > UINT32_MAX) throw ParseError("value out of range: " + std::string(value), line);
  return static_cast<uint32_t>(out);
}

double parse_f64(std::string_view value, uint32_t line) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ParseError("expected a number, got '" + std::string(value) + "'", line);
  }
  return out;
}

bool parse_bool(std::string_view value, uint32_t line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParseError("expected true or false, got '" + std::string(value) + "'", line);
}

bool apply_machine_key(MachineModel& m, std::string_view key, std::string_view value,
                       uint32_t line) {
  if (key.substr(0, 4) == "lat.") {
    std::optional<OpcodeClass> op = opcode_from_name(key.substr(4));
    if (!op) return false;
    m.latency[static_cast<int>(*op)] = parse_u32(value, line);
    return true;
  }
  if (key == "issue_width") {
    m.issue_width = parse_u32(value, line);
  } else if (key == "ls_ports") {
    m.ls_ports = parse_u32(value, line);
  } else if (key == "miss_penalty_cycles") {
    m.miss_penalty_cycles = parse_f64(value, line);
  } else if (key == "clock_ghz") {
    m.clock_ghz = parse_f64(value, line);
  } else if (key == "cores") {
    m.cores = parse_u32(value, line);
  } else {
    return false;
  }
  return true;
}

void apply_key(ToolkitConfig& cfg, std::string_view key, std::string_view value, uint32_t line) {
  auto unknown = [&]() -> void {
    throw ParseError("unknown config key '" + std::string(key) + "'", line);
  };
  if (key.substr(0, 4) == "cpu.") {
    if (!apply_machine_key(cfg.cpu, key.substr(4), value, line)) unknown();
  } else if (key.substr(0, 4) == "pim.") {
    if (!apply_machine_key(cfg.pim, key.substr(4), value, line)) unknown();
  } else if (key == "cost.cl_flush_fetch_cpu_ns") {
    cfg.cost.cl_flush_fetch_cpu_ns = parse_f64(value, line);
  } else if (key == "cost.cl_flush_fetch_pim_ns") {
    cfg.cost.cl_flush_fetch_pim_ns = parse_f64(value, line);
  } else if (key == "cost.register_dm_lines") {
    cfg.cost.register_dm_lines = parse_u32(value, line);
  } else if (key == "cost.context_switch_cycles") {
    cfg.cost.context_switch_cycles = parse_f64(value, line);
  } else if (key == "cost.clock_ghz") {
    cfg.cost.clock_ghz = parse_f64(value, line);
  } else if (key == "cost.line_bytes") {
    cfg.cost.line_bytes = parse_u32(value, line);
  } else if (key == "cache.size_bytes") {
    cfg.cache.size_bytes = parse_u64(value, line);
  } else if (key == "cache.associativity") {
    cfg.cache.associativity = parse_u32(value, line);
  } else if (key == "cache.line_bytes") {
    cfg.cache.line_bytes = parse_u32(value, line);
  } else if (key == "cluster.alpha") {
    cfg.clustering.alpha = parse_f64(value, line);
  } else if (key == "cluster.theta") {
    cfg.clustering.theta = parse_f64(value, line);
  } else if (key == "cluster.pairs") {
    if (value == "adjacent-or-sharing") {
      cfg.clustering.policy = PairPolicy::AdjacentOrSharing;
    } else if (value == "all-pairs") {
      cfg.clustering.policy = PairPolicy::AllPairs;
    } else {
      throw ParseError("cluster.pairs must be adjacent-or-sharing or all-pairs", line);
    }
  } else if (key == "cluster.use_trace") {
    cfg.clustering.use_trace = parse_bool(value, line);
  } else if (key == "classify.pressure_threshold") {
    cfg.thresholds.pressure_threshold = parse_f64(value, line);
  } else if (key == "classify.ai_threshold") {
    cfg.thresholds.ai_threshold = parse_f64(value, line);
  } else if (key == "classify.mpki_threshold") {
    cfg.thresholds.mpki_threshold = parse_f64(value, line);
  } else if (key == "tub.max_units") {
    cfg.tub_max_units = parse_u32(value, line);
  } else {
    unknown();
  }
}

void validate(const ToolkitConfig& cfg) {
  auto check_machine = [](const MachineModel& m, const char* side) {
    if (m.issue_width == 0 || m.ls_ports == 0 || m.cores == 0 || m.clock_ghz <= 0) {
      throw ParseError(std::string(side) + " model needs positive width, ports, cores, clock");
    }
  };
  check_machine(cfg.cpu, "cpu");
  check_machine(cfg.pim, "pim");
  if (cfg.cost.clock_ghz <= 0 || cfg.cost.line_bytes == 0) {
    throw ParseError("cost model needs a positive clock and line size");
  }
  if (cfg.cache.line_bytes == 0 || cfg.cache.associativity == 0 || cfg.cache.num_sets() == 0) {
    throw ParseError("cache config must yield at least one set");
  }
  if (cfg.clustering.alpha < 0 || cfg.clustering.alpha > 1) {
    throw ParseError("cluster.alpha must be in [0, 1]");
  }
  if (cfg.clustering.theta < 0) throw ParseError("cluster.theta must be >= 0");
}

std::string format_f64(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void dump_machine(std::ostringstream& out, const MachineModel& m, const char* prefix) {
  out << prefix << ".issue_width=" << m.issue_width << "\n";
  out << prefix << ".ls_ports=" << m.ls_ports << "\n";
  out << prefix << ".miss_penalty_cycles=" << format_f64(m.miss_penalty_cycles) << "\n";
  out << prefix << ".clock_ghz=" << format_f64(m.clock_ghz) << "\n";
  out << prefix << ".cores=" << m.cores << "\n";
  for (int i = 0; i < kOpcodeClassCount; ++i) {
    out << prefix << ".lat." << opcode_name(static_cast<OpcodeClass>(i)) << "="
        << m.latency[i] << "\n";
  }
}

}  // namespace

ToolkitConfig parse_config(std::string_view text) {
  ToolkitConfig cfg;
  uint32_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key=value", line_no);
    }
    std::string_view key = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty config key", line_no);
    apply_key(cfg, key, value, line_no);
  }
  validate(cfg);
  return cfg;
}

std::string dump_config(const ToolkitConfig& cfg) {
  std::ostringstream out;
  out << "# machine models\n";
  dump_machine(out, cfg.cpu, "cpu");
  dump_machine(out, cfg.pim, "pim");
  out << "# cost model\n";
  out << "cost.cl_flush_fetch_cpu_ns=" << format_f64(cfg.cost.cl_flush_fetch_cpu_ns) << "\n";
  out << "cost.cl_flush_fetch_pim_ns=" << format_f64(cfg.cost.cl_flush_fetch_pim_ns) << "\n";
  out << "cost.register_dm_lines=" << cfg.cost.register_dm_lines << "\n";
  out << "cost.context_switch_cycles=" << format_f64(cfg.cost.context_switch_cycles) << "\n";
  out << "cost.clock_ghz=" << format_f64(cfg.cost.clock_ghz) << "\n";
  out << "cost.line_bytes=" << cfg.cost.line_bytes << "\n";
  out << "# cache simulator\n";
  out << "cache.size_bytes=" << cfg.cache.size_bytes << "\n";
  out << "cache.associativity=" << cfg.cache.associativity << "\n";
  out << "cache.line_bytes=" << cfg.cache.line_bytes << "\n";
  out << "# clustering\n";
  out << "cluster.alpha=" << format_f64(cfg.clustering.alpha) << "\n";
  out << "cluster.theta=" << format_f64(cfg.clustering.theta) << "\n";
  out << "cluster.pairs="
      << (cfg.clustering.policy == PairPolicy::AllPairs ? "all-pairs" : "adjacent-or-sharing")
      << "\n";
  out << "cluster.use_trace=" << (cfg.clustering.use_trace ? "true" : "false") << "\n";
  out << "# classification\n";
  out << "classify.pressure_threshold=" << format_f64(cfg.thresholds.pressure_threshold) << "\n";
  out << "classify.ai_threshold=" << format_f64(cfg.thresholds.ai_threshold) << "\n";
  out << "classify.mpki_threshold=" << format_f64(cfg.thresholds.mpki_threshold) << "\n";
  out << "# enumeration\n";
  out << "tub.max_units=" << cfg.tub_max_units << "\n";
  return out.str();
}

}  // namespace a3pim
