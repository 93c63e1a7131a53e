// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Per-device dependency-annotated compute/communication streams for one
// representative (SPMD-symmetric) device, and the deterministic two-stream
// scheduler that turns them into a timeline.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "madmax/plan.hpp"
#include "madmax/workload.hpp"

namespace madmax {

enum class StreamKind { Compute, Comm };

struct Event {
  int id = -1;
  StreamKind stream = StreamKind::Compute;
  double duration = 0;
  std::vector<int> deps;
  bool blocking = true;  // comm only; a downstream compute event waits on it
  std::string layer;
  Phase phase = Phase::Forward;
  // compute | lookup | All2All | AllReduce | AllGather | ReduceScatter
  std::string kind;
  double magnitude = 0;  // flops or bytes
};

struct DeviceTrace {
  std::vector<Event> events;
  // Issue order per stream (FIFO execution order), a linear extension of
  // the dependency DAG restricted to that stream.
  std::vector<int> compute_order;
  std::vector<int> comm_order;
};

struct Timeline {
  std::vector<double> start;  // indexed by event id
  std::vector<double> end;
  double makespan = 0;
};

struct PhaseStep {
  const LayerSpec* layer = nullptr;
  Phase phase = Phase::Forward;
};

// Forward order as declared, plus the reversed order as a backward phase for
// training tasks.
std::vector<PhaseStep> build_execution_order(const ModelArch& model,
                                             const TaskSpec& task);

struct Scenario {
  const ModelArch* model = nullptr;
  const SystemSpec* system = nullptr;
  const TaskSpec* task = nullptr;
  ParallelPlan plan;
  TrainOptions options;
};

// Emits costed compute/lookup events and plan-derived communication events
// with their dependencies. Requires a plan that passed validate_plan.
DeviceTrace build_streams(const Scenario& scenario);

// Deterministic list scheduling: each stream runs its events in issue order,
// an event starting at max(stream free time, dependency finish times).
// Throws on dependency cycles.
Timeline simulate(const DeviceTrace& trace);

struct ExposedComm {
  double total = 0;  // comm busy while compute idle
  double total_comm = 0;
  std::vector<double> per_event;          // indexed by event id, comm only
  std::map<std::string, double> by_kind;  // collective kind -> exposed s
  double fraction() const { return total_comm > 0 ? total / total_comm : 0; }
};

ExposedComm exposed_comm(const DeviceTrace& trace, const Timeline& timeline);

// Chrome Trace Event JSON (one process, two threads: compute and comm).
std::string chrome_trace_json(const DeviceTrace& trace,
                              const Timeline& timeline);

}  // namespace madmax
