#include "a3pim/report.hpp"

#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace a3pim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

double speedup(double baseline_total, double total) {
  if (total > 0) return baseline_total / total;
  return baseline_total == 0 ? 1.0 : std::numeric_limits<double>::infinity();
}

ordered_json breakdown_json(const CostBreakdown& bd) {
  return {{"exec_ns", bd.exec_ns},
          {"cl_dm_ns", bd.cl_dm_ns},
          {"cxt_ns", bd.cxt_ns},
          {"total_ns", bd.total_ns}};
}

std::string members_field(const ClusterInfo& c) {
  std::string joined;
  for (uint32_t id : c.members) {
    if (!joined.empty()) joined += ' ';
    joined += std::to_string(id);
  }
  return joined;
}

}  // namespace

void fill_shares(StrategyRow& row) {
  const CostBreakdown& bd = row.breakdown;
  if (bd.total_ns == 0) {
    row.exec_share = 100;
    row.cl_dm_share = 0;
    row.cxt_share = 0;
    return;
  }
  row.exec_share = 100.0 * bd.exec_ns / bd.total_ns;
  row.cl_dm_share = 100.0 * bd.cl_dm_ns / bd.total_ns;
  row.cxt_share = 100.0 * bd.cxt_ns / bd.total_ns;
}

ComparisonReport compare_strategies(const Program& program, const Trace* trace,
                                    const ToolkitConfig& cfg) {
  ComparisonReport report;
  for (Strategy s : all_strategies()) {
    try {
      StrategyResult result = run_strategy(s, program, trace, cfg);
      StrategyRow row;
      row.strategy = strategy_name(s);
      row.breakdown = result.breakdown;
      fill_shares(row);
      report.rows.push_back(std::move(row));
    } catch (const InfeasibleError& e) {
      report.skipped.emplace_back(strategy_name(s), e.what());
    }
  }
  double cpu_total = 0;
  double pim_total = 0;
  for (const StrategyRow& row : report.rows) {
    if (row.strategy == strategy_name(Strategy::CpuOnly)) cpu_total = row.breakdown.total_ns;
    if (row.strategy == strategy_name(Strategy::PimOnly)) pim_total = row.breakdown.total_ns;
  }
  for (StrategyRow& row : report.rows) {
    row.speedup_vs_cpu_only = speedup(cpu_total, row.breakdown.total_ns);
    row.speedup_vs_pim_only = speedup(pim_total, row.breakdown.total_ns);
  }
  return report;
}

std::string comparison_to_json(const ComparisonReport& report) {
  ordered_json out;
  out["strategies"] = ordered_json::array();
  for (const StrategyRow& row : report.rows) {
    ordered_json j = breakdown_json(row.breakdown);
    ordered_json entry;
    entry["strategy"] = row.strategy;
    entry.update(j);
    entry["exec_share"] = row.exec_share;
    entry["cl_dm_share"] = row.cl_dm_share;
    entry["cxt_share"] = row.cxt_share;
    entry["speedup_vs_cpu_only"] = row.speedup_vs_cpu_only;
    entry["speedup_vs_pim_only"] = row.speedup_vs_pim_only;
    out["strategies"].push_back(std::move(entry));
  }
  out["skipped"] = ordered_json::array();
  for (const auto& [name, reason] : report.skipped) {
    out["skipped"].push_back({{"strategy", name}, {"reason", reason}});
  }
  return out.dump(2) + "\n";
}

std::string comparison_to_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "strategy,exec_ns,cl_dm_ns,cxt_ns,total_ns,exec_share,cl_dm_share,cxt_share,"
         "speedup_vs_cpu_only,speedup_vs_pim_only\n";
  for (const StrategyRow& row : report.rows) {
    out << row.strategy << ',' << fmt(row.breakdown.exec_ns) << ',' << fmt(row.breakdown.cl_dm_ns)
        << ',' << fmt(row.breakdown.cxt_ns) << ',' << fmt(row.breakdown.total_ns) << ','
        << fmt(row.exec_share) << ',' << fmt(row.cl_dm_share) << ',' << fmt(row.cxt_share) << ','
        << fmt(row.speedup_vs_cpu_only) << ',' << fmt(row.speedup_vs_pim_only) << '\n';
  }
  for (const auto& [name, reason] : report.skipped) {
    out << "# skipped " << name << ": " << reason << '\n';
  }
  return out.str();
}

std::string metrics_to_json(const std::vector<RegionMetrics>& metrics) {
  ordered_json out = ordered_json::array();
  for (const RegionMetrics& m : metrics) {
    out.push_back({{"region", m.region_id},
                   {"uops", m.uop_count},
                   {"mem_ops", m.mem_op_count},
                   {"compute_ops", m.compute_op_count},
                   {"ai", m.arithmetic_intensity},
                   {"pressure_cpu", m.port_pressure_cpu},
                   {"pressure_pim", m.port_pressure_pim},
                   {"cycles_cpu", m.est_cycles_cpu},
                   {"cycles_pim", m.est_cycles_pim},
                   {"frequency", m.frequency},
                   {"misses_per_exec", m.misses_per_exec},
                   {"parallel_capable", m.parallel_capable}});
  }
  return out.dump(2) + "\n";
}

std::string metrics_to_csv(const std::vector<RegionMetrics>& metrics) {
  std::ostringstream out;
  out << "region,uops,mem_ops,compute_ops,ai,pressure_cpu,pressure_pim,cycles_cpu,cycles_pim,"
         "frequency,misses_per_exec,parallel_capable\n";
  for (const RegionMetrics& m : metrics) {
    out << m.region_id << ',' << m.uop_count << ',' << m.mem_op_count << ','
        << m.compute_op_count << ',' << fmt(m.arithmetic_intensity) << ','
        << fmt(m.port_pressure_cpu) << ',' << fmt(m.port_pressure_pim) << ','
        << fmt(m.est_cycles_cpu) << ',' << fmt(m.est_cycles_pim) << ',' << m.frequency << ','
        << fmt(m.misses_per_exec) << ',' << (m.parallel_capable ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string clusters_to_json(const ClusterSet& clusters) {
  ordered_json out = ordered_json::array();
  for (const ClusterInfo& c : clusters.clusters) {
    out.push_back({{"cluster", c.id()},
                   {"members", c.members},
                   {"instructions", c.instruction_total},
                   {"frequency", c.frequency_total},
                   {"parallel", c.parallel},
                   {"trip_count", c.trip_count}});
  }
  return out.dump(2) + "\n";
}

std::string clusters_to_csv(const ClusterSet& clusters) {
  std::ostringstream out;
  out << "cluster,members,instructions,frequency,parallel,trip_count\n";
  for (const ClusterInfo& c : clusters.clusters) {
    out << c.id() << ',' << members_field(c) << ',' << c.instruction_total << ','
        << c.frequency_total << ',' << (c.parallel ? 1 : 0) << ',' << c.trip_count << '\n';
  }
  return out.str();
}

std::string schedule_to_json(const StrategyResult& result) {
  ordered_json out;
  out["strategy"] = strategy_name(result.strategy);
  out["assignment"] = ordered_json::array();
  for (const ClusterInfo& c : result.clusters.clusters) {
    out["assignment"].push_back({{"cluster", c.id()},
                                 {"members", c.members},
                                 {"target", target_name(result.schedule.at(c.id()))}});
  }
  out["breakdown"] = breakdown_json(result.breakdown);
  return out.dump(2) + "\n";
}

std::string schedule_to_csv(const StrategyResult& result) {
  std::ostringstream out;
  out << "cluster,members,target\n";
  for (const ClusterInfo& c : result.clusters.clusters) {
    out << c.id() << ',' << members_field(c) << ',' << target_name(result.schedule.at(c.id()))
        << '\n';
  }
  out << "\nexec_ns,cl_dm_ns,cxt_ns,total_ns\n";
  out << fmt(result.breakdown.exec_ns) << ',' << fmt(result.breakdown.cl_dm_ns) << ','
      << fmt(result.breakdown.cxt_ns) << ',' << fmt(result.breakdown.total_ns) << '\n';
  return out.str();
}

}  // namespace a3pim
