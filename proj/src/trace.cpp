// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0

#include "madmax/trace.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "madmax/cost.hpp"

namespace madmax {

std::vector<PhaseStep> build_execution_order(const ModelArch& model,
                                             const TaskSpec& task) {
  std::vector<PhaseStep> steps;
  steps.reserve(model.execution_order.size() * 2);
  for (const auto& id : model.execution_order) {
    steps.push_back({&model.layer(id), Phase::Forward});
  }
  if (task.training()) {
    for (auto it = model.execution_order.rbegin();
         it != model.execution_order.rend(); ++it) {
      steps.push_back({&model.layer(*it), Phase::Backward});
    }
  }
  return steps;
}

namespace {

struct StreamBuilder {
  const Scenario& sc;
  DeviceTrace trace;
  // Non-blocking comm events are issued at the end of their phase so they
  // do not head-of-line block gating collectives on the single comm stream
  // (mirrors frameworks running gradient sync on a side channel).
  std::vector<int> pending_nonblocking;

  int add_compute(double duration, const std::string& layer, Phase phase,
                  const std::string& kind, double magnitude,
                  std::vector<int> deps) {
    Event e;
    e.id = static_cast<int>(trace.events.size());
    e.stream = StreamKind::Compute;
    e.duration = duration;
    e.deps = std::move(deps);
    e.layer = layer;
    e.phase = phase;
    e.kind = kind;
    e.magnitude = magnitude;
    trace.events.push_back(e);
    trace.compute_order.push_back(e.id);
    return e.id;
  }

  // Returns -1 when the collective costs nothing (single participant).
  int add_comm(const CollectiveReq& req, std::vector<int> deps) {
    const double duration = collective_time(req, *sc.system);
    if (duration <= 0) return -1;
    Event e;
    e.id = static_cast<int>(trace.events.size());
    e.stream = StreamKind::Comm;
    e.duration = duration;
    e.deps = std::move(deps);
    e.blocking = req.blocking;
    e.layer = req.source_layer;
    e.phase = req.phase;
    e.kind = to_string(req.kind);
    e.magnitude = req.bytes_per_device;
    trace.events.push_back(e);
    if (req.blocking) {
      trace.comm_order.push_back(e.id);
    } else {
      pending_nonblocking.push_back(e.id);
    }
    return e.id;
  }

  void flush_nonblocking() {
    for (int id : pending_nonblocking) trace.comm_order.push_back(id);
    pending_nonblocking.clear();
  }
};

struct LayerCtx {
  const LayerSpec* layer = nullptr;
  PlanEntry entry;
  std::vector<CollectiveReq> collectives;
  double fwd_compute_time = 0;   // seconds, flops path
  double fwd_lookup_time = 0;    // seconds, HBM path
  double flops_per_device = 0;
  double lookup_bytes_per_device = 0;
  std::vector<std::string> inputs;    // effective producers
  std::vector<std::string> consumers;
  bool frozen = false;

  const CollectiveReq* find(Phase phase, CollectiveKind kind) const {
    for (const auto& c : collectives) {
      if (c.phase == phase && c.kind == kind) return &c;
    }
    return nullptr;
  }
};

std::int64_t tp_factor(const PlanEntry& e, const SystemSpec& sys) {
  std::int64_t f = 1;
  if (e.intra == Strategy::TP) f *= sys.devices_per_node;
  if (e.inter == Strategy::TP) f *= sys.num_nodes;
  return f;
}

std::int64_t mp_factor(const PlanEntry& e, const SystemSpec& sys) {
  std::int64_t f = 1;
  if (e.intra == Strategy::MP_SHARD) f *= sys.devices_per_node;
  if (e.inter == Strategy::MP_SHARD) f *= sys.num_nodes;
  return f;
}

}  // namespace

DeviceTrace build_streams(const Scenario& scenario) {
  const ModelArch& model = *scenario.model;
  const SystemSpec& system = *scenario.system;
  const TaskSpec& task = *scenario.task;
  const TrainOptions& opt = scenario.options;
  const auto& order = model.execution_order;

  // Per-layer derived quantities and dataflow.
  std::map<std::string, LayerCtx> ctx;
  for (size_t k = 0; k < order.size(); ++k) {
    const LayerSpec& layer = model.layer(order[k]);
    LayerCtx c;
    c.layer = &layer;
    c.entry = scenario.plan.entry_for(layer);
    c.frozen = task.frozen_layers.count(layer.id) > 0;
    c.collectives = required_collectives(layer, c.entry, task, system, opt);

    const double scope = batch_scope(c.entry, system, task.global_batch);
    c.flops_per_device =
        layer_fwd_flops(layer, std::max(scope, 1.0), task.context_length) /
        static_cast<double>(tp_factor(c.entry, system));
    if (layer.is_embedding() ||
        (std::holds_alternative<AggregateLayer>(layer.shape) &&
         std::get<AggregateLayer>(layer.shape).lookup_bytes_per_sample > 0)) {
      const double divisor =
          static_cast<double>(data_parallel_factor(c.entry, system)) *
          static_cast<double>(mp_factor(c.entry, system));
      c.lookup_bytes_per_device =
          embedding_lookup_bytes(layer, task.global_batch) / divisor *
          opt.lookup_skew;
    }
    c.fwd_compute_time = compute_time(c.flops_per_device, system.device);
    c.fwd_lookup_time = lookup_time(c.lookup_bytes_per_device, system.device);

    if (layer.inputs) {
      c.inputs = *layer.inputs;
    } else if (k > 0) {
      c.inputs = {order[k - 1]};
    }
    ctx[layer.id] = std::move(c);
  }
  for (const auto& id : order) {
    for (const auto& in : ctx[id].inputs) ctx[in].consumers.push_back(id);
  }

  StreamBuilder sb{scenario, {}, {}};
  const double bwd_scale = opt.bwd_flops_multiplier / 2.0;

  // ---- forward ----
  std::map<std::string, int> fwd_out;      // layer -> event consumers wait on
  std::map<std::string, int> fwd_compute;  // layer -> last fwd compute event
  int prev_fwd_compute = -1;
  for (size_t k = 0; k < order.size(); ++k) {
    LayerCtx& c = ctx[order[k]];
    const std::string& id = c.layer->id;

    std::vector<int> gates;
    for (const auto& in : c.inputs) {
      if (auto it = fwd_out.find(in); it != fwd_out.end() && it->second >= 0) {
        gates.push_back(it->second);
      }
    }

    if (const auto* ag = c.find(Phase::Forward, CollectiveKind::AllGather)) {
      std::vector<int> deps;
      if (prev_fwd_compute >= 0) deps.push_back(prev_fwd_compute);
      const int ev = sb.add_comm(*ag, std::move(deps));
      if (ev >= 0) gates.push_back(ev);
    }

    int dispatch = -1;
    if (std::holds_alternative<MoeLayer>(c.layer->shape)) {
      if (const auto* route = c.find(Phase::Forward, CollectiveKind::All2All)) {
        dispatch = sb.add_comm(*route, gates);
        if (dispatch >= 0 && route->blocking) gates.push_back(dispatch);
      }
    }

    int last = -1;
    if (c.fwd_lookup_time > 0) {
      last = sb.add_compute(c.fwd_lookup_time, id, Phase::Forward, "lookup",
                            c.lookup_bytes_per_device, gates);
      gates = {last};
    }
    if (c.flops_per_device > 0 || last < 0) {
      last = sb.add_compute(c.fwd_compute_time, id, Phase::Forward, "compute",
                            c.flops_per_device, gates);
    }
    fwd_compute[id] = last;
    prev_fwd_compute = last;

    int out = last;
    if (const auto* ar = c.find(Phase::Forward, CollectiveKind::AllReduce)) {
      const int ev = sb.add_comm(*ar, {last});
      if (ev >= 0) out = ev;
    }
    if (!std::holds_alternative<MoeLayer>(c.layer->shape)) {
      if (const auto* a2a = c.find(Phase::Forward, CollectiveKind::All2All)) {
        const int ev = sb.add_comm(*a2a, {last});
        if (ev >= 0) out = ev;
      }
    }
    fwd_out[id] = out;
  }
  sb.flush_nonblocking();

  if (!task.training()) return std::move(sb.trace);

  // ---- backward: reversed execution order ----
  std::map<std::string, int> bwd_out;
  const int final_fwd = fwd_out[order.back()];
  int last_bwd_compute = -1;       // previous bwd layer's last compute event
  int prev_bwd_compute2 = -1;      // one layer further back (prefetch target)
  int fallback_out = final_fwd;

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    LayerCtx& c = ctx[*it];
    const std::string& id = c.layer->id;

    std::vector<int> grad_src;
    for (const auto& consumer : c.consumers) {
      if (auto f = bwd_out.find(consumer); f != bwd_out.end() && f->second >= 0) {
        grad_src.push_back(f->second);
      }
    }
    if (grad_src.empty() && fallback_out >= 0) grad_src.push_back(fallback_out);

    const bool emb = c.layer->is_embedding();

    if (emb) {
      if (task.kind == TaskKind::Finetune && c.frozen) {
        bwd_out[id] = fallback_out;
        continue;
      }
      int gate = -1;
      if (const auto* a2a = c.find(Phase::Backward, CollectiveKind::All2All)) {
        gate = sb.add_comm(*a2a, grad_src);
      }
      std::vector<int> deps = gate >= 0 ? std::vector<int>{gate} : grad_src;
      const double dur = c.fwd_lookup_time * bwd_scale;
      const int wg = sb.add_compute(dur, id, Phase::Backward, "lookup",
                                    c.lookup_bytes_per_device * bwd_scale,
                                    std::move(deps));
      prev_bwd_compute2 = last_bwd_compute;
      last_bwd_compute = wg;
      bwd_out[id] = gate >= 0 ? gate : wg;
      fallback_out = bwd_out[id];
      continue;
    }

    if (const auto* ag = c.find(Phase::Backward, CollectiveKind::AllGather)) {
      // Prefetch launches the gather one layer earlier in the backward
      // order, overlapping it with the previous layer's grad computation.
      const int anchor = scenario.plan.fsdp_prefetch ? prev_bwd_compute2
                                                     : last_bwd_compute;
      std::vector<int> deps;
      if (anchor >= 0) {
        deps.push_back(anchor);
      } else if (!scenario.plan.fsdp_prefetch && final_fwd >= 0) {
        deps.push_back(final_fwd);
      }
      const int ev = sb.add_comm(*ag, std::move(deps));
      if (ev >= 0) grad_src.push_back(ev);
    }

    if (std::holds_alternative<MoeLayer>(c.layer->shape)) {
      if (const auto* route = c.find(Phase::Backward, CollectiveKind::All2All)) {
        const int ev = sb.add_comm(*route, grad_src);
        if (ev >= 0 && route->blocking) grad_src.push_back(ev);
      }
    }

    const double dur = c.fwd_compute_time * bwd_scale;
    const double mag = c.flops_per_device * bwd_scale;
    const int igrad = sb.add_compute(dur, id, Phase::Backward, "compute", mag,
                                     grad_src);
    int wgrad = -1;
    if (!c.frozen) {
      wgrad = sb.add_compute(dur, id, Phase::Backward, "compute", mag, {igrad});
    }

    int out = igrad;
    if (!c.inputs.empty()) {
      if (const auto* ar = c.find(Phase::Backward, CollectiveKind::AllReduce)) {
        if (ar->blocking) {
          const int ev = sb.add_comm(*ar, {igrad});
          if (ev >= 0) out = ev;
        }
      }
    }

    // Gradient sync rides at the tail of the comm stream.
    for (const auto& req : c.collectives) {
      if (req.phase != Phase::Backward || req.blocking) continue;
      if (wgrad >= 0) sb.add_comm(req, {wgrad});
    }

    prev_bwd_compute2 = last_bwd_compute;
    last_bwd_compute = wgrad >= 0 ? wgrad : igrad;
    bwd_out[id] = out;
    fallback_out = out;
  }
  sb.flush_nonblocking();

  return std::move(sb.trace);
}

Timeline simulate(const DeviceTrace& trace) {
  const size_t n = trace.events.size();
  Timeline tl;
  tl.start.assign(n, 0);
  tl.end.assign(n, 0);

  // An event starts at max(dep finish times, stream free time); with FIFO
  // streams this is a pure longest-path computation over the dependency DAG
  // extended with per-stream predecessor edges.
  std::vector<int> stream_prev(n, -1);
  for (const auto* stream_order : {&trace.compute_order, &trace.comm_order}) {
    for (size_t i = 1; i < stream_order->size(); ++i) {
      stream_prev[(*stream_order)[i]] = (*stream_order)[i - 1];
    }
  }

  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (const auto& e : trace.events) {
    for (int d : e.deps) {
      if (d < 0 || d >= static_cast<int>(n)) {
        throw std::runtime_error("event dependency out of range");
      }
      succ[d].push_back(e.id);
      ++indeg[e.id];
    }
    if (stream_prev[e.id] >= 0) {
      succ[stream_prev[e.id]].push_back(e.id);
      ++indeg[e.id];
    }
  }

  std::queue<int> ready;
  for (size_t i = 0; i < n; ++i) {
    if (indeg[i] == 0) ready.push(static_cast<int>(i));
  }
  size_t processed = 0;
  while (!ready.empty()) {
    const int id = ready.front();
    ready.pop();
    ++processed;
    double s = 0;
    for (int d : trace.events[id].deps) s = std::max(s, tl.end[d]);
    if (stream_prev[id] >= 0) s = std::max(s, tl.end[stream_prev[id]]);
    tl.start[id] = s;
    tl.end[id] = s + trace.events[id].duration;
    tl.makespan = std::max(tl.makespan, tl.end[id]);
    for (int nxt : succ[id]) {
      if (--indeg[nxt] == 0) ready.push(nxt);
    }
  }
  if (processed != n) {
    throw std::runtime_error("dependency cycle in device trace");
  }
  return tl;
}

ExposedComm exposed_comm(const DeviceTrace& trace, const Timeline& timeline) {
  ExposedComm ex;
  ex.per_event.assign(trace.events.size(), 0.0);

  std::vector<std::pair<double, double>> busy;  // compute intervals
  for (const auto& e : trace.events) {
    if (e.stream == StreamKind::Compute && e.duration > 0) {
      busy.emplace_back(timeline.start[e.id], timeline.end[e.id]);
    }
  }
  std::sort(busy.begin(), busy.end());

  for (const auto& e : trace.events) {
    if (e.stream != StreamKind::Comm) continue;
    ex.total_comm += e.duration;
    const double s = timeline.start[e.id];
    const double t = timeline.end[e.id];
    double overlapped = 0;
    for (const auto& [bs, be] : busy) {
      if (be <= s) continue;
      if (bs >= t) break;
      overlapped += std::min(t, be) - std::max(s, bs);
    }
    const double exposed = std::max(0.0, e.duration - overlapped);
    ex.per_event[e.id] = exposed;
    ex.total += exposed;
    ex.by_kind[e.kind] += exposed;
  }
  return ex;
}

std::string chrome_trace_json(const DeviceTrace& trace,
                              const Timeline& timeline) {
  using nlohmann::json;
  json events = json::array();
  auto thread_meta = [](int tid, const char* name) {
    return json{{"name", "thread_name"}, {"ph", "M"},   {"pid", 1},
                {"tid", tid},            {"args", json{{"name", name}}}};
  };
  events.push_back(thread_meta(1, "compute"));
  events.push_back(thread_meta(2, "comm"));
  for (const auto& e : trace.events) {
    json ev;
    ev["name"] = e.layer + "_" + (e.phase == Phase::Forward ? "f" : "b") + "_" +
                 e.kind;
    ev["ph"] = "X";
    ev["pid"] = 1;
    ev["tid"] = e.stream == StreamKind::Compute ? 1 : 2;
    ev["ts"] = timeline.start[e.id] * 1e6;
    ev["dur"] = e.duration * 1e6;
    ev["args"] = json{{"layer", e.layer},
                      {"phase", to_string(e.phase)},
                      {"kind", e.kind},
                      {"magnitude", e.magnitude},
                      {"blocking", e.blocking}};
    events.push_back(ev);
  }
  json doc;
  doc["traceEvents"] = events;
  doc["displayTimeUnit"] = "ms";
  return doc.dump(2);
}

}  // namespace madmax
