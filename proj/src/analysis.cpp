// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0

#include "madmax/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <stdexcept>

#include "madmax/cost.hpp"

namespace madmax {

ReportSummary summarize(const Scenario& scenario, const DeviceTrace& trace,
                        const Timeline& timeline, double reference_peak) {
  ReportSummary s;
  s.overlapped_iter_time = timeline.makespan;
  for (const auto& e : trace.events) {
    s.serialized_iter_time += e.duration;
    s.serialized_breakdown[e.kind] += e.duration;
    if (e.stream == StreamKind::Comm) {
      s.collective_breakdown[e.kind] += e.duration;
    }
  }

  const ExposedComm ex = exposed_comm(trace, timeline);
  s.exposed_comm_fraction = ex.fraction();

  const TaskSpec& task = *scenario.task;
  s.throughput_unit = task.work_unit;
  if (timeline.makespan > 0) {
    s.throughput = task.batch_units() / timeline.makespan;
  }

  s.memory = per_device_memory(*scenario.model, scenario.plan, task,
                               *scenario.system, scenario.options);

  const SystemSpec& sys = *scenario.system;
  const double device_hours_per_iter =
      timeline.makespan / 3600.0 * static_cast<double>(sys.total_devices());
  if (task.batch_units() > 0) {
    s.normalized_gpu_hours_per_unit_work =
        normalized_gpu_hours(device_hours_per_iter, sys.device, reference_peak) /
        task.batch_units();
  }
  return s;
}

TrainingDuration training_duration(const ReportSummary& summary,
                                   const TaskSpec& task,
                                   const SystemSpec& system) {
  if (task.total_work <= 0) {
    throw std::invalid_argument("training_duration requires task.total_work");
  }
  TrainingDuration d;
  d.steps = task.total_work / task.batch_units();
  d.days = d.steps * summary.overlapped_iter_time / 86400.0;
  d.device_hours = d.days * 24.0 * static_cast<double>(system.total_devices());
  return d;
}

double device_hours_for_steps(const ReportSummary& summary,
                              const SystemSpec& system, double steps) {
  return steps * summary.overlapped_iter_time / 3600.0 *
         static_cast<double>(system.total_devices());
}

double normalized_gpu_hours(double device_hours, const DeviceSpec& device,
                            double reference_peak) {
  if (reference_peak <= 0 || device.peak_flops <= 0) {
    throw std::invalid_argument("normalized_gpu_hours requires positive peaks");
  }
  return device_hours * device.peak_flops / reference_peak;
}

Objective objective_from_string(const std::string& s) {
  if (s == "throughput") return Objective::Throughput;
  if (s == "gpu-hours" || s == "gpu_hours") return Objective::GpuHours;
  if (s == "exposed") return Objective::ExposedComm;
  throw std::invalid_argument("unknown objective '" + s + "'");
}

std::vector<ParallelPlan> enumerate_plans(const ModelArch& model,
                                          const SystemSpec& system,
                                          const TaskSpec& task,
                                          const ParallelPlan& base,
                                          const SweepDomain& domain,
                                          const TrainOptions& options) {
  if (domain.layer_types.empty()) {
    throw std::invalid_argument("sweep domain has no layer types");
  }
  std::vector<Strategy> intra = domain.intra_strategies.empty()
                                    ? domain.strategies
                                    : domain.intra_strategies;
  std::vector<Strategy> inter = domain.inter_strategies.empty()
                                    ? domain.strategies
                                    : domain.inter_strategies;
  if (intra.empty() || inter.empty()) {
    throw std::invalid_argument("sweep domain has no strategies");
  }

  std::vector<PlanEntry> entries;
  for (Strategy a : intra) {
    for (Strategy b : inter) entries.push_back({a, b});
  }

  std::vector<std::string> types = domain.layer_types;
  std::sort(types.begin(), types.end());

  std::vector<ParallelPlan> out;
  std::vector<size_t> idx(types.size(), 0);
  while (true) {
    ParallelPlan plan = base;
    for (size_t i = 0; i < types.size(); ++i) {
      plan.by_type[types[i]] = entries[idx[i]];
    }
    PlanValidation v = validate_plan(model, plan, task, system, options);
    if (v.structural_ok()) out.push_back(std::move(plan));

    size_t pos = 0;
    while (pos < idx.size()) {
      if (++idx[pos] < entries.size()) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == idx.size()) break;
  }
  return out;
}

PlanResult evaluate_plan(const Scenario& scenario, bool simulate_infeasible,
                         double reference_peak) {
  PlanResult r;
  r.plan = scenario.plan;
  r.plan_string = scenario.plan.to_string();
  r.validation = validate_plan(*scenario.model, scenario.plan, *scenario.task,
                               *scenario.system, scenario.options);
  r.feasible = r.validation.ok;
  if (!r.validation.structural_ok()) return r;
  if (r.feasible || simulate_infeasible) {
    const DeviceTrace trace = build_streams(scenario);
    const Timeline timeline = simulate(trace);
    r.summary = summarize(scenario, trace, timeline, reference_peak);
  }
  return r;
}

namespace {

double objective_value(const PlanResult& r, Objective o) {
  if (!r.summary) return 0;
  switch (o) {
    case Objective::Throughput:
      return r.summary->throughput;
    case Objective::GpuHours:
      // Lower is better; negate so one comparator serves all objectives.
      return -r.summary->normalized_gpu_hours_per_unit_work;
    case Objective::ExposedComm:
      return -r.summary->exposed_comm_fraction;
  }
  return 0;
}

}  // namespace

std::vector<PlanResult> search_optimal(const Scenario& base,
                                       const std::vector<ParallelPlan>& plans,
                                       Objective objective, bool ignore_memory,
                                       int jobs, double reference_peak) {
  if (plans.empty()) {
    throw std::invalid_argument("search_optimal: empty plan domain");
  }

  std::vector<PlanResult> results(plans.size());
  auto eval_one = [&](size_t i) {
    Scenario sc = base;
    sc.plan = plans[i];
    results[i] = evaluate_plan(sc, ignore_memory, reference_peak);
  };

  if (jobs <= 1) {
    for (size_t i = 0; i < plans.size(); ++i) eval_one(i);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < plans.size();
           i = next.fetch_add(1)) {
        eval_one(i);
      }
    };
    std::vector<std::future<void>> futures;
    const int workers = std::min<size_t>(jobs, plans.size());
    futures.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, worker));
    }
    for (auto& f : futures) f.get();
  }

  const bool any_feasible =
      std::any_of(results.begin(), results.end(),
                  [](const PlanResult& r) { return r.feasible; });
  if (!any_feasible && !ignore_memory) {
    throw std::runtime_error(
        "search_optimal: every candidate plan is infeasible (try "
        "--ignore-memory)");
  }

  std::stable_sort(results.begin(), results.end(),
                   [&](const PlanResult& a, const PlanResult& b) {
                     const bool ranked_a = a.summary.has_value() &&
                                           (a.feasible || ignore_memory);
                     const bool ranked_b = b.summary.has_value() &&
                                           (b.feasible || ignore_memory);
                     if (ranked_a != ranked_b) return ranked_a;
                     if (!ranked_a) return a.plan_string < b.plan_string;
                     const double oa = objective_value(a, objective);
                     const double ob = objective_value(b, objective);
                     if (oa != ob) return oa > ob;
                     if (a.validation.memory.total != b.validation.memory.total) {
                       return a.validation.memory.total <
                              b.validation.memory.total;
                     }
                     return a.plan_string < b.plan_string;
                   });
  return results;
}

std::vector<PlanResult> pareto_frontier(const std::vector<PlanResult>& results) {
  if (results.empty()) {
    throw std::invalid_argument("pareto_frontier: empty result set");
  }
  std::vector<PlanResult> candidates;
  for (const auto& r : results) {
    if (r.summary) candidates.push_back(r);
  }
  auto mem = [](const PlanResult& r) { return r.validation.memory.total; };
  auto thr = [](const PlanResult& r) { return r.summary->throughput; };

  // Sort by memory, break ties toward higher throughput, then sweep keeping
  // only strict throughput improvements. Exact duplicates collapse onto the
  // lexicographically smallest plan, so input order cannot matter.
  std::sort(candidates.begin(), candidates.end(),
            [&](const PlanResult& a, const PlanResult& b) {
              if (mem(a) != mem(b)) return mem(a) < mem(b);
              if (thr(a) != thr(b)) return thr(a) > thr(b);
              return a.plan_string < b.plan_string;
            });
  std::vector<PlanResult> frontier;
  double best_thr = -1;
  for (const auto& r : candidates) {
    if (thr(r) > best_thr) {
      frontier.push_back(r);
      best_thr = thr(r);
    }
  }
  return frontier;
}

}  // namespace madmax
