#include "a3pim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace a3pim {

namespace {

uint64_t count_mem_ops(const Region& region) {
  return static_cast<uint64_t>(std::count_if(region.instructions.begin(),
                                             region.instructions.end(), [](const Instruction& i) {
                                               return is_memory_op(i.opcode);
                                             }));
}

uint64_t count_compute_ops(const Region& region) {
  return static_cast<uint64_t>(std::count_if(region.instructions.begin(),
                                             region.instructions.end(), [](const Instruction& i) {
                                               return is_compute_op(i.opcode);
                                             }));
}

Schedule uniform_schedule(const ClusterSet& clusters, Target side) {
  Schedule schedule;
  for (const ClusterInfo& c : clusters.clusters) schedule[c.id()] = side;
  return schedule;
}

StrategyResult finish(Strategy strategy, Program program, ClusterSet clusters,
                      Schedule schedule, const std::vector<RegionMetrics>& metrics,
                      const Trace* trace, const ToolkitConfig& cfg) {
  StrategyResult result;
  result.strategy = strategy;
  result.breakdown = total_cost(program, clusters, schedule, metrics, cfg.cpu, cfg.pim,
                                cfg.cost, trace);
  result.program = std::move(program);
  result.clusters = std::move(clusters);
  result.schedule = std::move(schedule);
  return result;
}

}  // namespace

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::CpuOnly: return "cpu-only";
    case Strategy::PimOnly: return "pim-only";
    case Strategy::Mpki: return "mpki";
    case Strategy::Greedy: return "greedy";
    case Strategy::Tub: return "tub";
    case Strategy::A3PimBbls: return "a3pim-bbls";
    case Strategy::A3PimFunc: return "a3pim-func";
  }
  return "?";
}

std::optional<Strategy> strategy_from_name(std::string_view name) {
  for (Strategy s : all_strategies()) {
    if (name == strategy_name(s)) return s;
  }
  return std::nullopt;
}

std::vector<Strategy> all_strategies() {
  return {Strategy::CpuOnly, Strategy::PimOnly, Strategy::Mpki,      Strategy::Greedy,
          Strategy::Tub,     Strategy::A3PimBbls, Strategy::A3PimFunc};
}

ClusterTraits cluster_traits(const ClusterInfo& cluster, const Program& program,
                             const MachineModel& cpu, const MachineModel& pim) {
  ClusterTraits traits;
  traits.cluster_id = cluster.id();
  double weighted_mem = 0;
  double weighted_compute = 0;
  double weighted_cycles = 0;
  for (uint32_t id : cluster.members) {
    const Region& region = program.region(id);
    double f = static_cast<double>(region.frequency);
    weighted_mem += f * static_cast<double>(count_mem_ops(region));
    weighted_compute += f * static_cast<double>(count_compute_ops(region));
    weighted_cycles += f * estimate_cycles(region, cpu);
  }
  if (weighted_mem > 0 && weighted_cycles > 0) {
    traits.port_pressure = std::min(1.0, weighted_mem / cpu.ls_ports / weighted_cycles);
  }
  traits.arithmetic_intensity = weighted_compute / std::max(1.0, weighted_mem);
  traits.parallel_capable = cluster.parallel && cluster.trip_count >= pim.cores;
  return traits;
}

Target classify_cluster(const ClusterTraits& traits, const ClassifierThresholds& th) {
  if (traits.parallel_capable) return Target::PIM;
  if (traits.port_pressure >= th.pressure_threshold) return Target::PIM;
  if (traits.arithmetic_intensity < th.ai_threshold) return Target::PIM;
  return Target::CPU;
}

std::vector<RegionMetrics> pipeline_metrics(const Program& program, const Trace* trace,
                                            const ToolkitConfig& cfg) {
  if (!trace) return analyze(program, cfg.cpu, cfg.pim);
  MissProfile profile = miss_profile(simulate_cache(*trace, cfg.cache), program);
  return analyze(program, cfg.cpu, cfg.pim, &profile);
}

StrategyResult baseline_cpu_only(const Program& program, const Trace* trace,
                                 const ToolkitConfig& cfg) {
  ClusterSet clusters = singleton_clusters(program);
  Schedule schedule = uniform_schedule(clusters, Target::CPU);
  return finish(Strategy::CpuOnly, program, std::move(clusters), std::move(schedule),
                pipeline_metrics(program, trace, cfg), trace, cfg);
}

StrategyResult baseline_pim_only(const Program& program, const Trace* trace,
                                 const ToolkitConfig& cfg) {
  ClusterSet clusters = singleton_clusters(program);
  Schedule schedule = uniform_schedule(clusters, Target::PIM);
  return finish(Strategy::PimOnly, program, std::move(clusters), std::move(schedule),
                pipeline_metrics(program, trace, cfg), trace, cfg);
}

StrategyResult baseline_mpki(const Program& program, const Trace* trace,
                             const ToolkitConfig& cfg) {
  if (!trace) throw InfeasibleError("strategy mpki requires a trace");
  CacheSimResult sim = simulate_cache(*trace, cfg.cache);
  ClusterSet clusters = singleton_clusters(program);
  Schedule schedule;
  for (const Region& region : program.regions) {
    RegionCacheStats stats;
    auto it = sim.per_region.find(region.id);
    if (it != sim.per_region.end()) stats = it->second;
    schedule[region.id] =
        mpki(stats, region) >= cfg.thresholds.mpki_threshold ? Target::PIM : Target::CPU;
  }
  return finish(Strategy::Mpki, program, std::move(clusters), std::move(schedule),
                pipeline_metrics(program, trace, cfg), trace, cfg);
}

StrategyResult baseline_greedy(const Program& program, const Trace* trace,
                               const ToolkitConfig& cfg) {
  std::vector<RegionMetrics> metrics = pipeline_metrics(program, trace, cfg);
  ClusterSet clusters = singleton_clusters(program);
  Schedule schedule;
  for (const RegionMetrics& m : metrics) {
    double on_cpu = exec_cost_ns(m, Target::CPU, cfg.cpu, cfg.pim, cfg.cost);
    double on_pim = exec_cost_ns(m, Target::PIM, cfg.cpu, cfg.pim, cfg.cost);
    schedule[m.region_id] = on_pim < on_cpu ? Target::PIM : Target::CPU;
  }
  return finish(Strategy::Greedy, program, std::move(clusters), std::move(schedule), metrics,
                trace, cfg);
}

StrategyResult theoretical_upper_bound(const Program& program, const Trace* trace,
                                       const ToolkitConfig& cfg) {
  ClusterSet clusters = singleton_clusters(program);
  size_t n = clusters.clusters.size();
  if (n > cfg.tub_max_units) {
    throw InfeasibleError("tub over " + std::to_string(cfg.tub_max_units) + " units (" +
                          std::to_string(n) + " regions)");
  }
  std::vector<RegionMetrics> metrics = pipeline_metrics(program, trace, cfg);

  // Everything below repeats total_cost() term for term, accumulated in the
  // same order, so the enumeration is exact; the precomputation only strips
  // the per-mask map rebuilds out of the 2^n loop.
  std::unordered_map<uint32_t, size_t> unit_of = clusters.region_index();

  struct ExecTerm {
    double cpu_ns, pim_ns;
    size_t unit;
  };
  std::vector<ExecTerm> exec_terms;
  exec_terms.reserve(metrics.size());
  for (const RegionMetrics& m : metrics) {
    exec_terms.push_back({exec_cost_ns(m, Target::CPU, cfg.cpu, cfg.pim, cfg.cost),
                          exec_cost_ns(m, Target::PIM, cfg.cpu, cfg.pim, cfg.cost),
                          unit_of.at(m.region_id)});
  }

  struct LineTouch {
    uint32_t line, unit;
  };
  std::vector<LineTouch> touches;
  uint32_t line_count = 0;
  if (trace) {
    std::unordered_map<uint64_t, uint32_t> line_index;
    for (const TraceEvent& event : trace->events) {
      auto unit = static_cast<uint32_t>(unit_of.at(event.region_id));
      for (uint64_t addr : event.addresses) {
        auto [it, inserted] = line_index.try_emplace(addr / cfg.cost.line_bytes, line_count);
        if (inserted) ++line_count;
        touches.push_back({it->second, unit});
      }
    }
  }

  struct EdgeTerm {
    size_t from, to;
    uint64_t count;
    bool reg_coupled;
  };
  std::vector<EdgeTerm> edge_terms;
  edge_terms.reserve(program.cfg_edges.size());
  for (const CfgEdge& e : program.cfg_edges) {
    bool coupled =
        pair_reuse(program.region(e.from), program.region(e.to)).register_reuse > 0;
    edge_terms.push_back({unit_of.at(e.from), unit_of.at(e.to), e.count, coupled});
  }

  const Target sides[2] = {Target::CPU, Target::PIM};
  double transfer[2][2];
  for (int f = 0; f < 2; ++f) {
    for (int t = 0; t < 2; ++t) transfer[f][t] = line_transfer_ns(sides[f], sides[t], cfg.cost);
  }

  std::vector<int8_t> owner(line_count);
  uint64_t best_mask = 0;
  std::string best_key;
  std::string key(n, 'C');
  double best_total = 0;
  bool have_best = false;
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    double exec_ns = 0;
    for (const ExecTerm& t : exec_terms) {
      exec_ns += (mask >> t.unit) & 1 ? t.pim_ns : t.cpu_ns;
    }
    double cl_dm_ns = 0;
    if (trace) {
      std::fill(owner.begin(), owner.end(), int8_t{-1});
      double trace_dm = 0;
      for (const LineTouch& t : touches) {
        auto side = static_cast<int8_t>((mask >> t.unit) & 1);
        int8_t& own = owner[t.line];
        if (own < 0) {
          own = side;
        } else if (own != side) {
          trace_dm += transfer[own][side];
          own = side;
        }
      }
      cl_dm_ns += trace_dm;
    }
    double reg_dm = 0;
    uint64_t crossings = 0;
    for (const EdgeTerm& e : edge_terms) {
      int from = (mask >> e.from) & 1;
      int to = (mask >> e.to) & 1;
      if (from == to) continue;
      crossings += e.count;
      if (e.reg_coupled) {
        reg_dm +=
            static_cast<double>(e.count) * cfg.cost.register_dm_lines * transfer[from][to];
      }
    }
    cl_dm_ns += reg_dm;
    double cxt_ns = static_cast<double>(crossings) * cfg.cost.context_switch_cycles /
                    cfg.cost.clock_ghz;
    double total = exec_ns + cl_dm_ns + cxt_ns;

    bool better = !have_best || total < best_total;
    bool tied = have_best && total == best_total;
    if (better || tied) {
      for (size_t i = 0; i < n; ++i) key[i] = (mask >> i) & 1 ? 'P' : 'C';
      if (better || key < best_key) {
        have_best = true;
        best_total = total;
        best_key = key;
        best_mask = mask;
      }
    }
  }

  Schedule best_schedule;
  for (size_t i = 0; i < n; ++i) {
    best_schedule[clusters.clusters[i].id()] =
        (best_mask >> i) & 1 ? Target::PIM : Target::CPU;
  }
  return finish(Strategy::Tub, program, std::move(clusters), std::move(best_schedule), metrics,
                trace, cfg);
}

StrategyResult a3pim(const Program& program, const Trace* trace, const ToolkitConfig& cfg,
                     Granularity granularity) {
  Program local = granularity == Granularity::Functions ? coarsen_to_functions(program) : program;
  std::optional<Trace> coarse_trace;
  const Trace* tp = trace;
  if (trace && granularity == Granularity::Functions) {
    coarse_trace = coarsen_trace(*trace, program);
    tp = &*coarse_trace;
  }

  std::vector<RegionMetrics> metrics = pipeline_metrics(local, tp, cfg);
  ClusterSet clusters = cluster(local, cfg.clustering, tp);
  Schedule schedule;
  for (const ClusterInfo& c : clusters.clusters) {
    schedule[c.id()] = classify_cluster(cluster_traits(c, local, cfg.cpu, cfg.pim),
                                        cfg.thresholds);
  }
  Strategy strategy =
      granularity == Granularity::Functions ? Strategy::A3PimFunc : Strategy::A3PimBbls;
  return finish(strategy, std::move(local), std::move(clusters), std::move(schedule), metrics,
                tp, cfg);
}

StrategyResult run_strategy(Strategy strategy, const Program& program, const Trace* trace,
                            const ToolkitConfig& cfg) {
  switch (strategy) {
    case Strategy::CpuOnly: return baseline_cpu_only(program, trace, cfg);
    case Strategy::PimOnly: return baseline_pim_only(program, trace, cfg);
    case Strategy::Mpki: return baseline_mpki(program, trace, cfg);
    case Strategy::Greedy: return baseline_greedy(program, trace, cfg);
    case Strategy::Tub: return theoretical_upper_bound(program, trace, cfg);
    case Strategy::A3PimBbls: return a3pim(program, trace, cfg, Granularity::BasicBlocks);
    case Strategy::A3PimFunc: return a3pim(program, trace, cfg, Granularity::Functions);
  }
  throw std::logic_error("unreachable strategy");
}

}  // namespace a3pim
