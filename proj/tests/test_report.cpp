#include <cmath>
#include <string>

#include "a3pim/report.hpp"
#include "a3pim/workload.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace a3pim;

namespace {

ComparisonReport mixed_report(const Trace* trace) {
  WorkloadSpec spec;
  spec.archetype = Archetype::MixedPhase;
  spec.seed = 3;
  static Workload w = generate(spec);
  ToolkitConfig cfg;
  return compare_strategies(w.program, trace ? &w.trace : nullptr, cfg);
}

}  // namespace

TEST_CASE("shares sum to one hundred and speedups divide baselines") {
  WorkloadSpec spec;
  spec.archetype = Archetype::MixedPhase;
  spec.seed = 3;
  Workload w = generate(spec);
  ToolkitConfig cfg;
  ComparisonReport report = compare_strategies(w.program, &w.trace, cfg);
  REQUIRE(report.rows.size() == 7);
  CHECK(report.skipped.empty());

  double cpu_total = report.rows[0].breakdown.total_ns;
  double pim_total = report.rows[1].breakdown.total_ns;
  REQUIRE(report.rows[0].strategy == "cpu-only");
  REQUIRE(report.rows[1].strategy == "pim-only");

  for (const StrategyRow& row : report.rows) {
    CAPTURE(row.strategy);
    double sum = row.exec_share + row.cl_dm_share + row.cxt_share;
    CHECK(std::abs(sum - 100.0) < 0.01);
    CHECK(row.speedup_vs_cpu_only == cpu_total / row.breakdown.total_ns);
    CHECK(row.speedup_vs_pim_only == pim_total / row.breakdown.total_ns);
  }
  CHECK(report.rows[0].speedup_vs_cpu_only == 1.0);
  CHECK(report.rows[1].speedup_vs_pim_only == 1.0);
}

TEST_CASE("a zero-cost row reports pure exec and unit speedup") {
  StrategyRow row;
  row.breakdown = CostBreakdown{};
  fill_shares(row);
  CHECK(row.exec_share == 100.0);
  CHECK(row.cl_dm_share == 0.0);
  CHECK(row.cxt_share == 0.0);
}

TEST_CASE("infeasible strategies are skipped with a reason, not fatal") {
  WorkloadSpec spec;
  Workload w = generate(spec);
  ToolkitConfig cfg;
  cfg.tub_max_units = 1;  // force tub infeasible

  // No trace: mpki must be skipped too.
  ComparisonReport report = compare_strategies(w.program, nullptr, cfg);
  REQUIRE(report.skipped.size() == 2);
  CHECK(report.skipped[0].first == "mpki");
  CHECK(report.skipped[0].second.find("trace") != std::string::npos);
  CHECK(report.skipped[1].first == "tub");
  CHECK(report.rows.size() == 5);
  for (const StrategyRow& row : report.rows) {
    CHECK(row.strategy != "mpki");
    CHECK(row.strategy != "tub");
  }
  // Speedups still fill from the uniform rows.
  CHECK(report.rows[0].speedup_vs_cpu_only == 1.0);
}

TEST_CASE("comparison JSON is machine-readable with stable keys") {
  ComparisonReport report = mixed_report(nullptr);
  nlohmann::json doc = nlohmann::json::parse(comparison_to_json(report));
  REQUIRE(doc.contains("strategies"));
  REQUIRE(doc.contains("skipped"));
  REQUIRE(doc["strategies"].is_array());
  REQUIRE_FALSE(doc["strategies"].empty());
  const auto& first = doc["strategies"][0];
  for (const char* key : {"strategy", "exec_ns", "cl_dm_ns", "cxt_ns", "total_ns", "exec_share",
                          "cl_dm_share", "cxt_share", "speedup_vs_cpu_only",
                          "speedup_vs_pim_only"}) {
    CAPTURE(key);
    CHECK(first.contains(key));
  }
  CHECK(first["strategy"] == "cpu-only");
  CHECK(doc["skipped"][0]["strategy"] == "mpki");
}

TEST_CASE("comparison CSV has a header and one row per strategy") {
  ComparisonReport report = mixed_report(nullptr);
  std::string csv = comparison_to_csv(report);
  CHECK(csv.rfind("strategy,exec_ns,cl_dm_ns,cxt_ns,total_ns,", 0) == 0);
  size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  // Header, one row per feasible strategy, one comment per skipped one.
  CHECK(lines == 1 + report.rows.size() + report.skipped.size());
  CHECK(csv.find("# skipped mpki:") != std::string::npos);
}

TEST_CASE("metrics, clusters and schedule renderings stay well-formed") {
  WorkloadSpec spec;
  Workload w = generate(spec);
  ToolkitConfig cfg;

  std::vector<RegionMetrics> metrics = pipeline_metrics(w.program, &w.trace, cfg);
  nlohmann::json mdoc = nlohmann::json::parse(metrics_to_json(metrics));
  REQUIRE(mdoc.is_array());
  CHECK(mdoc.size() == w.program.regions.size());
  CHECK(mdoc[0].contains("ai"));
  CHECK(metrics_to_csv(metrics).rfind("region,uops,", 0) == 0);

  StrategyResult r = run_strategy(Strategy::A3PimBbls, w.program, &w.trace, cfg);
  nlohmann::json cdoc = nlohmann::json::parse(clusters_to_json(r.clusters));
  REQUIRE(cdoc.is_array());
  size_t member_total = 0;
  for (const auto& c : cdoc) member_total += c["members"].size();
  CHECK(member_total == w.program.regions.size());

  nlohmann::json sdoc = nlohmann::json::parse(schedule_to_json(r));
  CHECK(sdoc["strategy"] == "a3pim-bbls");
  REQUIRE(sdoc["assignment"].is_array());
  for (const auto& entry : sdoc["assignment"]) {
    std::string target = entry["target"];
    CHECK((target == "CPU" || target == "PIM"));
  }
  CHECK(sdoc["breakdown"]["total_ns"].get<double>() == r.breakdown.total_ns);

  std::string scsv = schedule_to_csv(r);
  CHECK(scsv.rfind("cluster,members,target\n", 0) == 0);
  CHECK(scsv.find("exec_ns,cl_dm_ns,cxt_ns,total_ns") != std::string::npos);
}
