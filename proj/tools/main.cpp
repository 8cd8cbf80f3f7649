#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "a3pim/config.hpp"
#include "a3pim/report.hpp"
#include "a3pim/scheduler.hpp"
#include "a3pim/workload.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

a3pim::ToolkitConfig load_effective_config(const std::string& flag_path) {
  std::string path = flag_path;
  if (path.empty()) {
    if (const char* env = std::getenv("A3PIM_CONFIG"); env && *env) path = env;
  }
  if (path.empty()) return {};
  try {
    return a3pim::parse_config(read_file(path));
  } catch (const a3pim::ParseError& e) {
    std::string where = path;
    if (e.line()) where += ":" + std::to_string(e.line());
    throw a3pim::ParseError(where + ": " + e.what(), e.line(), e.column());
  }
}

a3pim::Program load_program(const std::string& path) {
  try {
    return a3pim::parse_program(read_file(path));
  } catch (const a3pim::ParseError& e) {
    std::string where = path;
    if (e.line()) where += ":" + std::to_string(e.line());
    throw a3pim::ParseError(where + ": " + e.what(), e.line(), e.column());
  }
}

a3pim::Trace load_trace(const std::string& path, const a3pim::Program& program) {
  try {
    return a3pim::parse_trace(read_file(path), program);
  } catch (const a3pim::ParseError& e) {
    std::string where = path;
    if (e.line()) where += ":" + std::to_string(e.line());
    throw a3pim::ParseError(where + ": " + e.what(), e.line(), e.column());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static CPU/PIM offload analysis and scheduling"};
  app.require_subcommand(1);

  std::string ir_path, trace_path, config_path, out_path;
  std::string format = "json";
  std::string granularity = "bbls";
  std::string strategy_name_arg;

  auto add_common = [&](CLI::App* cmd, bool with_trace) {
    cmd->add_option("--ir", ir_path, "program file (.a3ir)")->required();
    if (with_trace) cmd->add_option("--trace", trace_path, "trace file (.a3trace)");
    cmd->add_option("--config", config_path, "config file (fallback: $A3PIM_CONFIG)");
    cmd->add_option("--out", out_path, "write output here instead of stdout");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* analyze = app.add_subcommand("analyze", "per-region static metrics");
  add_common(analyze, true);
  analyze->add_option("--granularity", granularity, "bbls or func")
      ->check(CLI::IsMember({"bbls", "func"}));

  CLI::App* cluster_cmd = app.add_subcommand("cluster", "affinity clusters");
  add_common(cluster_cmd, true);
  cluster_cmd->add_option("--granularity", granularity, "bbls or func")
      ->check(CLI::IsMember({"bbls", "func"}));

  CLI::App* schedule = app.add_subcommand("schedule", "run one strategy");
  add_common(schedule, true);
  schedule->add_option("--strategy", strategy_name_arg, "cpu-only | pim-only | mpki | greedy | tub | a3pim-bbls | a3pim-func")
      ->required();

  CLI::App* compare = app.add_subcommand("compare", "run all strategies");
  add_common(compare, true);

  std::string archetype_arg = "mixed-phase";
  uint32_t regions = 12;
  uint64_t seed = 1;
  double sharing = 0.1;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic workload");
  gen->add_option("--archetype", archetype_arg,
                  "graph-irregular | streaming-memory | compute-dense | mixed-phase | "
                  "hashjoin-like | mlp-like");
  gen->add_option("--regions", regions, "region count");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--sharing", sharing, "sharing density in [0,1]");
  gen->add_option("--out", out_path, "output path prefix (.a3ir/.a3trace appended)")
      ->required();

  CLI::App* config_cmd = app.add_subcommand("config", "show the effective config");
  config_cmd->add_flag("--dump", "print every key with its effective value");
  config_cmd->add_option("--config", config_path, "config file (fallback: $A3PIM_CONFIG)");
  config_cmd->add_option("--out", out_path, "write output here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    a3pim::ToolkitConfig cfg = load_effective_config(config_path);

    if (config_cmd->parsed()) {
      emit(out_path, a3pim::dump_config(cfg));
      return 0;
    }

    if (gen->parsed()) {
      std::optional<a3pim::Archetype> arch = a3pim::archetype_from_name(archetype_arg);
      if (!arch) {
        std::cerr << "unknown archetype '" << archetype_arg << "'\n";
        return kExitUsage;
      }
      a3pim::WorkloadSpec spec;
      spec.archetype = *arch;
      spec.region_count = regions;
      spec.seed = seed;
      spec.sharing_density = sharing;
      a3pim::Workload w = a3pim::generate(spec);
      std::string ir_file = out_path + ".a3ir";
      std::string trace_file = out_path + ".a3trace";
      write_file(ir_file, a3pim::serialize_program(w.program));
      write_file(trace_file, a3pim::serialize_trace(w.trace));
      nlohmann::ordered_json summary;
      summary["ir"] = ir_file;
      summary["trace"] = trace_file;
      summary["regions"] = w.program.regions.size();
      summary["events"] = w.trace.events.size();
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    a3pim::Program program = load_program(ir_path);
    std::optional<a3pim::Trace> trace;
    if (!trace_path.empty()) trace = load_trace(trace_path, program);
    const a3pim::Trace* tp = trace ? &*trace : nullptr;

    if (analyze->parsed() || cluster_cmd->parsed()) {
      std::optional<a3pim::Trace> coarse;
      if (granularity == "func") {
        if (tp) {
          coarse = a3pim::coarsen_trace(*tp, program);
          tp = &*coarse;
        }
        program = a3pim::coarsen_to_functions(program);
      }
      if (analyze->parsed()) {
        std::vector<a3pim::RegionMetrics> metrics = a3pim::pipeline_metrics(program, tp, cfg);
        emit(out_path,
             format == "csv" ? a3pim::metrics_to_csv(metrics) : a3pim::metrics_to_json(metrics));
      } else {
        a3pim::ClusterSet clusters = a3pim::cluster(program, cfg.clustering, tp);
        emit(out_path, format == "csv" ? a3pim::clusters_to_csv(clusters)
                                       : a3pim::clusters_to_json(clusters));
      }
      return 0;
    }

    if (schedule->parsed()) {
      std::optional<a3pim::Strategy> strategy = a3pim::strategy_from_name(strategy_name_arg);
      if (!strategy) {
        std::cerr << "unknown strategy '" << strategy_name_arg << "'\n";
        return kExitUsage;
      }
      a3pim::StrategyResult result = a3pim::run_strategy(*strategy, program, tp, cfg);
      emit(out_path, format == "csv" ? a3pim::schedule_to_csv(result)
                                     : a3pim::schedule_to_json(result));
      return 0;
    }

    if (compare->parsed()) {
      a3pim::ComparisonReport report = a3pim::compare_strategies(program, tp, cfg);
      emit(out_path, format == "csv" ? a3pim::comparison_to_csv(report)
                                     : a3pim::comparison_to_json(report));
      return 0;
    }
  } catch (const a3pim::InfeasibleError& e) {
    std::cerr << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
