// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: single evaluations, plan sweeps, hardware scaling
// studies, and trace export for the performance model.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "madmax/analysis.hpp"
#include "madmax/cost.hpp"
#include "madmax/json_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;

struct CommonArgs {
  std::string model_path;
  std::string system_path;
  std::string task_path;
  std::string out_dir = ".";
  std::string efficiency_csv;
  bool ignore_memory = false;
  bool prefetch = false;
  std::string objective = "throughput";
  double reference_peak = madmax::kA100PeakFlops;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--model", a.model_path, "Model JSON (path or fixture name)")
      ->required();
  cmd->add_option("--system", a.system_path,
                  "System JSON (path or fixture name)")
      ->required();
  cmd->add_option("--task", a.task_path, "Task JSON (path or fixture name)")
      ->required();
  cmd->add_option("--out", a.out_dir, "Output directory");
  cmd->add_option("--efficiency", a.efficiency_csv,
                  "collective,level,min_bytes,efficiency CSV merged into the "
                  "system spec");
  cmd->add_flag("--ignore-memory", a.ignore_memory,
                "Simulate OOM plans instead of dropping them");
  cmd->add_flag("--prefetch", a.prefetch, "Force FSDP backward prefetching");
  cmd->add_option("--objective", a.objective,
                  "throughput | gpu-hours | exposed");
  cmd->add_option("--reference-peak", a.reference_peak,
                  "Reference peak FLOPS for normalized GPU-hours");
  cmd->add_option("--jobs", a.jobs, "Parallel plan evaluations");
}

struct LoadedInputs {
  madmax::ModelArch model;
  madmax::SystemSpec system;
  madmax::TaskFile task_file;
};

LoadedInputs load_inputs(const CommonArgs& a) {
  LoadedInputs in;
  in.model = madmax::load_model_file(
      madmax::resolve_input_path(a.model_path, "models"));
  in.system = madmax::load_system_file(
      madmax::resolve_input_path(a.system_path, "systems"));
  in.task_file =
      madmax::load_task_file(madmax::resolve_input_path(a.task_path, "tasks"));
  if (!a.efficiency_csv.empty()) {
    const auto extra = madmax::load_efficiency_csv(a.efficiency_csv);
    in.system.collective_efficiency.insert(
        in.system.collective_efficiency.end(), extra.begin(), extra.end());
  }
  if (a.prefetch) in.task_file.plan.fsdp_prefetch = true;
  return in;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

madmax::Scenario make_scenario(const LoadedInputs& in) {
  madmax::Scenario sc;
  sc.model = &in.model;
  sc.system = &in.system;
  sc.task = &in.task_file.task;
  sc.plan = in.task_file.plan;
  sc.options = in.task_file.options;
  return sc;
}

int cmd_run(const CommonArgs& a, bool export_trace_only) {
  const LoadedInputs in = load_inputs(a);
  const madmax::Scenario sc = make_scenario(in);

  madmax::PlanResult result =
      madmax::evaluate_plan(sc, a.ignore_memory, a.reference_peak);
  const fs::path out(a.out_dir);
  fs::create_directories(out);

  if (!export_trace_only) {
    const json report =
        madmax::report_to_json(sc, result, in.task_file.report_steps);
    write_file(out / "report.json", report.dump(2) + "\n");
    if (result.summary) {
      write_file(out / "breakdown.csv",
                 madmax::breakdown_csv(*result.summary));
    }
  }

  if (!result.validation.structural_ok()) {
    std::cerr << "infeasible plan (structural):\n";
    for (const auto& v : result.validation.structural_violations) {
      std::cerr << "  - " << v << "\n";
    }
    return kExitInfeasible;
  }
  if (!result.feasible && !a.ignore_memory) {
    std::cerr << "infeasible plan: out of memory by "
              << madmax::format_g6(result.validation.memory.overage() / 1e9)
              << " GB per device (total "
              << madmax::format_g6(result.validation.memory.total / 1e9)
              << " GB vs capacity "
              << madmax::format_g6(result.validation.memory.hbm_capacity / 1e9)
              << " GB)\n";
    return kExitInfeasible;
  }

  if (export_trace_only || result.summary) {
    const madmax::DeviceTrace trace = madmax::build_streams(sc);
    const madmax::Timeline timeline = madmax::simulate(trace);
    write_file(out / "timeline.trace.json",
               madmax::chrome_trace_json(trace, timeline) + "\n");
  }

  if (result.summary) {
    std::cout << "serialized_iter_ms="
              << madmax::format_g6(result.summary->serialized_iter_time * 1e3)
              << " overlapped_iter_ms="
              << madmax::format_g6(result.summary->overlapped_iter_time * 1e3)
              << " throughput="
              << madmax::format_g6(result.summary->throughput) << " exposed="
              << madmax::format_g6(result.summary->exposed_comm_fraction)
              << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const CommonArgs& a) {
  const LoadedInputs in = load_inputs(a);
  if (!in.task_file.sweep) {
    std::cerr << "task file has no sweep domain\n";
    return kExitInputError;
  }
  const madmax::Scenario sc = make_scenario(in);
  const auto plans = madmax::enumerate_plans(in.model, in.system,
                                             in.task_file.task, in.task_file.plan,
                                             *in.task_file.sweep,
                                             in.task_file.options);
  if (plans.empty()) {
    std::cerr << "sweep domain is empty after structural filtering\n";
    return kExitInputError;
  }
  const auto results = madmax::search_optimal(
      sc, plans, madmax::objective_from_string(a.objective), a.ignore_memory,
      a.jobs, a.reference_peak);

  std::vector<madmax::PlanResult> rows;
  for (const auto& r : results) {
    if (r.feasible || a.ignore_memory) rows.push_back(r);
  }
  const auto frontier = madmax::pareto_frontier(rows);

  const fs::path out(a.out_dir);
  fs::create_directories(out);
  const madmax::WorkUnit unit = in.task_file.task.work_unit;
  write_file(out / "sweep.csv", madmax::sweep_csv(rows, unit));
  write_file(out / "pareto.csv", madmax::pareto_csv(frontier, unit));

  for (const auto& r : results) {
    std::cout << r.plan_string << (r.feasible ? "" : " [infeasible]");
    if (r.summary) {
      std::cout << " throughput=" << madmax::format_g6(r.summary->throughput);
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_scale_study(const CommonArgs& a, const std::vector<double>& factors,
                    const std::vector<std::string>& components) {
  for (double f : factors) {
    if (f <= 0) {
      std::cerr << "scale factors must be > 0\n";
      return kExitInputError;
    }
  }
  const LoadedInputs in = load_inputs(a);
  madmax::Scenario sc = make_scenario(in);

  madmax::PlanResult base =
      madmax::evaluate_plan(sc, a.ignore_memory, a.reference_peak);
  if (!base.summary) {
    std::cerr << "baseline plan infeasible; cannot run scale study\n";
    return kExitInfeasible;
  }
  const double base_thr = base.summary->throughput;

  std::ostringstream csv;
  csv << "component,factor,iter_ms,throughput,speedup\n";
  auto emit = [&](const std::string& component, double factor,
                  const madmax::HardwareScaling& scaling) {
    const madmax::SystemSpec scaled = madmax::scale_hardware(in.system, scaling);
    madmax::Scenario s2 = sc;
    s2.system = &scaled;
    const madmax::PlanResult r =
        madmax::evaluate_plan(s2, a.ignore_memory, a.reference_peak);
    csv << component << "," << madmax::format_g6(factor) << ",";
    if (r.summary) {
      csv << madmax::format_g6(r.summary->overlapped_iter_time * 1e3) << ","
          << madmax::format_g6(r.summary->throughput) << ","
          << madmax::format_g6(r.summary->throughput / base_thr);
    } else {
      csv << ",,";
    }
    csv << "\n";
  };

  for (double f : factors) {
    for (const auto& c : components) {
      madmax::HardwareScaling s;
      if (c == "compute") {
        s.compute = f;
      } else if (c == "hbm_capacity") {
        s.hbm_capacity = f;
      } else if (c == "hbm_bw") {
        s.hbm_bw = f;
      } else if (c == "intra_bw") {
        s.intra_bw = f;
      } else if (c == "inter_bw") {
        s.inter_bw = f;
      } else {
        std::cerr << "unknown component '" << c << "'\n";
        return kExitInputError;
      }
      emit(c, f, s);
    }
    madmax::HardwareScaling all{f, f, f, f, f};
    emit("all", f, all);
  }

  const fs::path out(a.out_dir);
  fs::create_directories(out);
  write_file(out / "scale.csv", csv.str());
  std::cout << csv.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytical performance model for distributed ML workloads"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "Evaluate one (model, system, task, plan) combination");
  add_common(run, run_args);
  bool run_trace = false;
  run->add_flag("--trace", run_trace, "Also write timeline.trace.json");

  CommonArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Search the parallelization design space of the task");
  add_common(sweep, sweep_args);

  CommonArgs scale_args;
  CLI::App* scale = app.add_subcommand(
      "scale-study", "Scale hardware components separately and concurrently");
  add_common(scale, scale_args);
  std::vector<double> factors{10.0};
  scale->add_option("--factors", factors, "Scaling factors")->delimiter(',');
  std::vector<std::string> components{"compute", "hbm_capacity", "hbm_bw",
                                      "intra_bw", "inter_bw"};
  scale->add_option("--components", components, "Components to scale")
      ->delimiter(',');

  CommonArgs trace_args;
  CLI::App* trace = app.add_subcommand(
      "export-trace", "Write the simulated timeline in Chrome trace format");
  add_common(trace, trace_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const int rc = cmd_run(run_args, false);
      if (rc == kExitOk && run_trace) return cmd_run(run_args, true);
      return rc;
    }
    if (sweep->parsed()) return cmd_sweep(sweep_args);
    if (scale->parsed()) {
      return cmd_scale_study(scale_args, factors, components);
    }
    if (trace->parsed()) return cmd_run(trace_args, true);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
