// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0
//
// JSON wire formats for the model/system/task file trio, canonical
// serialization, and deterministic report emission.

#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "madmax/analysis.hpp"

namespace madmax {

// Parsed task file: task plus the plan and knobs that ride along with it.
struct TaskFile {
  TaskSpec task;
  ParallelPlan plan;
  TrainOptions options;
  std::optional<SweepDomain> sweep;
  std::optional<double> report_steps;  // extra device-hours projection
};

ModelArch parse_model_json(const std::string& text);
SystemSpec parse_system_json(const std::string& text);
TaskFile parse_task_json(const std::string& text);

// Canonical form; serialize(parse(x)) is a fixed point.
std::string serialize_model(const ModelArch& model);
std::string serialize_system(const SystemSpec& system);
std::string serialize_task(const TaskFile& file);

// Loaders that prefix parse errors with the file path.
ModelArch load_model_file(const std::string& path);
SystemSpec load_system_file(const std::string& path);
TaskFile load_task_file(const std::string& path);

// Fixture resolution: an existing path wins; otherwise the name is looked
// up (with .json appended) under the MADMAX_FIXTURES directory and its
// models/, systems/, tasks/ subdirectories.
std::string resolve_input_path(const std::string& name_or_path,
                               const char* category);

// Fixed 6-significant-digit float formatting so outputs are diffable.
std::string format_g6(double v);
double round_g6(double v);

nlohmann::json report_to_json(const Scenario& scenario,
                              const PlanResult& result,
                              std::optional<double> report_steps);

std::string breakdown_csv(const ReportSummary& summary);
std::string sweep_csv(const std::vector<PlanResult>& results, WorkUnit unit);
std::string pareto_csv(const std::vector<PlanResult>& results, WorkUnit unit);

}  // namespace madmax
