// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Workload metrics (throughput, breakdowns, duration projections) and
// design-space search over parallelization plans.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "madmax/trace.hpp"

namespace madmax {

inline constexpr double kA100PeakFlops = 156e12;  // TF32 reference peak

struct ReportSummary {
  double overlapped_iter_time = 0;  // seconds (makespan)
  double serialized_iter_time = 0;  // seconds (sum of all durations)
  double throughput = 0;            // work units per second
  WorkUnit throughput_unit = WorkUnit::Samples;
  double exposed_comm_fraction = 0;  // of total communication time
  std::map<std::string, double> serialized_breakdown;  // label -> seconds
  std::map<std::string, double> collective_breakdown;  // kind -> seconds
  MemoryFootprint memory;
  double normalized_gpu_hours_per_unit_work = 0;
};

struct TrainingDuration {
  double steps = 0;
  double days = 0;
  double device_hours = 0;  // aggregate, for total_work
};

ReportSummary summarize(const Scenario& scenario, const DeviceTrace& trace,
                        const Timeline& timeline,
                        double reference_peak = kA100PeakFlops);

TrainingDuration training_duration(const ReportSummary& summary,
                                   const TaskSpec& task,
                                   const SystemSpec& system);

double device_hours_for_steps(const ReportSummary& summary,
                              const SystemSpec& system, double steps);

// Aggregate device-hours scaled to a reference accelerator's peak.
double normalized_gpu_hours(double device_hours, const DeviceSpec& device,
                            double reference_peak);

struct PlanResult {
  ParallelPlan plan;
  std::string plan_string;
  bool feasible = false;
  PlanValidation validation;
  std::optional<ReportSummary> summary;  // absent for unsimulated OOM plans
};

struct SweepDomain {
  // Layer types whose entries are enumerated; everything else must be
  // pinned by the base plan.
  std::vector<std::string> layer_types;
  std::vector<Strategy> strategies = {Strategy::DDP, Strategy::FSDP,
                                      Strategy::TP};
  std::vector<Strategy> intra_strategies;  // optional per-level restriction
  std::vector<Strategy> inter_strategies;
};

// Cartesian product of per-type strategy pairs, filtered for structural
// validity, in deterministic order. OOM plans are kept (flagged infeasible
// later); structural violations are dropped.
std::vector<ParallelPlan> enumerate_plans(const ModelArch& model,
                                          const SystemSpec& system,
                                          const TaskSpec& task,
                                          const ParallelPlan& base,
                                          const SweepDomain& domain,
                                          const TrainOptions& options);

enum class Objective { Throughput, GpuHours, ExposedComm };
Objective objective_from_string(const std::string& s);

PlanResult evaluate_plan(const Scenario& scenario, bool simulate_infeasible,
                         double reference_peak = kA100PeakFlops);

// Evaluates every plan and ranks by objective (throughput descending by
// default); ties broken by lower per-device memory, then plan string.
// With ignore_memory, OOM plans are simulated and ranked as well.
// Throws if every plan is infeasible and ignore_memory is off.
std::vector<PlanResult> search_optimal(const Scenario& base,
                                       const std::vector<ParallelPlan>& plans,
                                       Objective objective,
                                       bool ignore_memory = false,
                                       int jobs = 1,
                                       double reference_peak = kA100PeakFlops);

// Maximal subset where no other result has <= memory and >= throughput with
// one strict; sorted by memory. Input order does not matter.
std::vector<PlanResult> pareto_frontier(const std::vector<PlanResult>& results);

}  // namespace madmax
