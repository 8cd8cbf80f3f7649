#pragma once

#include <string>
#include <utility>
#include <vector>

#include "a3pim/scheduler.hpp"

namespace a3pim {

struct StrategyRow {
  std::string strategy;
  CostBreakdown breakdown;
  // Percent of total_ns; they sum to 100 (exec gets 100 when total is 0).
  double exec_share = 0;
  double cl_dm_share = 0;
  double cxt_share = 0;
  // Baseline total / this strategy's total.
  double speedup_vs_cpu_only = 0;
  double speedup_vs_pim_only = 0;
};

struct ComparisonReport {
  /// Rows in canonical strategy order; infeasible strategies are absent.
  std::vector<StrategyRow> rows;
  /// (strategy, reason) for each strategy that could not run.
  std::vector<std::pair<std::string, std::string>> skipped;
};

/// Runs every strategy and assembles shares and speedups. A strategy that
/// throws InfeasibleError lands in `skipped`.
ComparisonReport compare_strategies(const Program& program, const Trace* trace,
                                    const ToolkitConfig& cfg);

void fill_shares(StrategyRow& row);

std::string comparison_to_json(const ComparisonReport& report);
std::string comparison_to_csv(const ComparisonReport& report);

std::string metrics_to_json(const std::vector<RegionMetrics>& metrics);
std::string metrics_to_csv(const std::vector<RegionMetrics>& metrics);

std::string clusters_to_json(const ClusterSet& clusters);
std::string clusters_to_csv(const ClusterSet& clusters);

std::string schedule_to_json(const StrategyResult& result);
std::string schedule_to_csv(const StrategyResult& result);

}  // namespace a3pim
