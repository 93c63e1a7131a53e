// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0

#include "madmax/plan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace madmax {

namespace {

bool shards_params(Strategy s) {
  return s == Strategy::FSDP || s == Strategy::TP || s == Strategy::MP_SHARD;
}

bool partitions_batch(Strategy s) {
  return s == Strategy::DDP || s == Strategy::FSDP;
}

bool has(const PlanEntry& e, Strategy s) {
  return e.intra == s || e.inter == s;
}

// Span of a strategy that appears at one or both levels.
SpanLevel span_of(const PlanEntry& e, Strategy s) {
  if (e.intra == s && e.inter == s) return SpanLevel::Global;
  return e.intra == s ? SpanLevel::Intra : SpanLevel::Inter;
}

std::int64_t level_size(const SystemSpec& sys, SpanLevel lvl) {
  switch (lvl) {
    case SpanLevel::Intra: return sys.devices_per_node;
    case SpanLevel::Inter: return sys.num_nodes;
    case SpanLevel::Global: return sys.total_devices();
  }
  return 1;
}

// Shard factor contributed by the levels a strategy does NOT occupy; the
// bytes a collective moves are already divided by it.
std::int64_t other_level_sharding(const PlanEntry& e, Strategy s,
                                  const SystemSpec& sys) {
  std::int64_t f = 1;
  if (e.intra != s && shards_params(e.intra)) f *= sys.devices_per_node;
  if (e.inter != s && shards_params(e.inter)) f *= sys.num_nodes;
  return f;
}

}  // namespace

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::DDP: return "DDP";
    case Strategy::FSDP: return "FSDP";
    case Strategy::TP: return "TP";
    case Strategy::MP_SHARD: return "MP";
    case Strategy::NONE: return "NONE";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "DDP") return Strategy::DDP;
  if (s == "FSDP") return Strategy::FSDP;
  if (s == "TP") return Strategy::TP;
  if (s == "MP" || s == "MP_SHARD") return Strategy::MP_SHARD;
  if (s == "NONE") return Strategy::NONE;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

const char* to_string(Phase p) {
  return p == Phase::Forward ? "forward" : "backward";
}

std::string PlanEntry::to_string() const {
  std::string s = "(";
  if (intra == inter && intra == Strategy::MP_SHARD) {
    s += "MP";
  } else {
    s += madmax::to_string(intra);
    s += ",";
    s += madmax::to_string(inter);
  }
  s += ")";
  return s;
}

const PlanEntry* ParallelPlan::find(const LayerSpec& layer) const {
  if (auto it = by_id.find(layer.id); it != by_id.end()) return &it->second;
  if (auto it = by_type.find(layer.type_name()); it != by_type.end()) {
    return &it->second;
  }
  return nullptr;
}

PlanEntry ParallelPlan::entry_for(const LayerSpec& layer) const {
  const PlanEntry* e = find(layer);
  if (!e) {
    throw std::invalid_argument("plan does not cover layer '" + layer.id +
                                "' (type '" + layer.type_name() + "')");
  }
  return *e;
}

std::string ParallelPlan::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [type, entry] : by_type) {
    if (!first) os << ";";
    os << type << "=" << entry.to_string();
    first = false;
  }
  for (const auto& [id, entry] : by_id) {
    if (!first) os << ";";
    os << id << "=" << entry.to_string();
    first = false;
  }
  return os.str();
}

std::int64_t sharding_factor(const PlanEntry& entry, const SystemSpec& system) {
  std::int64_t f = 1;
  if (shards_params(entry.intra)) f *= system.devices_per_node;
  if (shards_params(entry.inter)) f *= system.num_nodes;
  return f;
}

std::int64_t data_parallel_factor(const PlanEntry& entry,
                                  const SystemSpec& system) {
  std::int64_t f = 1;
  if (partitions_batch(entry.intra)) f *= system.devices_per_node;
  if (partitions_batch(entry.inter)) f *= system.num_nodes;
  return f;
}

double batch_scope(const PlanEntry& entry, const SystemSpec& system,
                   double global_batch) {
  return global_batch / static_cast<double>(data_parallel_factor(entry, system));
}

std::vector<CollectiveReq> required_collectives(const LayerSpec& layer,
                                                const PlanEntry& entry,
                                                const TaskSpec& task,
                                                const SystemSpec& system,
                                                const TrainOptions& options) {
  if (has(entry, Strategy::MP_SHARD) && !layer.is_embedding()) {
    throw std::invalid_argument("MP sharding requested for non-embedding layer '" +
                                layer.id + "'");
  }

  const bool train = task.training();
  const bool frozen = task.frozen_layers.count(layer.id) > 0;
  const bool grads = train && !frozen;
  const double prec = layer.param_precision_bytes;
  const double grad_prec = options.grad_comm_precision_bytes > 0
                               ? options.grad_comm_precision_bytes
                               : prec;
  const double params = layer_param_count(layer);
  const auto ctx = task.context_length;
  const double scope = batch_scope(entry, system, task.global_batch);
  const std::int64_t total = system.total_devices();

  std::vector<CollectiveReq> reqs;
  auto add = [&](CollectiveKind kind, double bytes, Phase phase, bool blocking,
                 SpanLevel level) {
    reqs.push_back({kind, bytes, phase, blocking, level, layer.id});
  };

  if (has(entry, Strategy::FSDP)) {
    const SpanLevel span = span_of(entry, Strategy::FSDP);
    const double other = other_level_sharding(entry, Strategy::FSDP, system);
    const double shard =
        params * prec / other / level_size(system, span);
    add(CollectiveKind::AllGather, shard, Phase::Forward, true, span);
    if (train) {
      add(CollectiveKind::AllGather, shard, Phase::Backward, true, span);
      if (grads) {
        const double grad_shard =
            params * grad_prec / other / level_size(system, span);
        add(CollectiveKind::ReduceScatter, grad_shard, Phase::Backward, false,
            span);
      }
    }
  }

  if (has(entry, Strategy::TP)) {
    const SpanLevel span = span_of(entry, Strategy::TP);
    const double bytes = tp_partial_sum_bytes(layer, scope, ctx);
    add(CollectiveKind::AllReduce, bytes, Phase::Forward, true, span);
    if (train) {
      add(CollectiveKind::AllReduce, bytes, Phase::Backward, true, span);
    }
  }

  if (has(entry, Strategy::DDP) && grads) {
    const SpanLevel span = span_of(entry, Strategy::DDP);
    const double bytes = params * grad_prec /
                         other_level_sharding(entry, Strategy::DDP, system);
    add(CollectiveKind::AllReduce, bytes, Phase::Backward, false, span);
  }

  if (has(entry, Strategy::MP_SHARD)) {
    // Each device ends with the pooled vectors for its share of samples.
    const SpanLevel span = span_of(entry, Strategy::MP_SHARD);
    const std::int64_t participants = level_size(system, span);
    const double local = task.global_batch / static_cast<double>(total);
    const double pooled = layer_activation_bytes(layer, local, ctx);
    const double bytes = pooled * (participants - 1) / participants;
    add(CollectiveKind::All2All, bytes, Phase::Forward, true, span);
    if (grads) {
      add(CollectiveKind::All2All, bytes, Phase::Backward, true, span);
    }
  }

  if (const auto* moe = std::get_if<MoeLayer>(&layer.shape)) {
    // Token routing: each device's samples visit active experts elsewhere;
    // uniform routing sends the (total-1)/total fraction off-device.
    const double local = task.global_batch / static_cast<double>(total);
    const double route = layer_activation_bytes(*moe->expert, local, ctx) *
                         static_cast<double>(moe->active_experts) *
                         (total - 1) / total;
    add(CollectiveKind::All2All, route, Phase::Forward,
        options.moe_all2all_blocking, SpanLevel::Global);
    if (train) {
      add(CollectiveKind::All2All, route, Phase::Backward,
          options.moe_all2all_blocking, SpanLevel::Global);
    }
  }

  return reqs;
}

MemoryFootprint per_device_memory(const ModelArch& model,
                                  const ParallelPlan& plan,
                                  const TaskSpec& task,
                                  const SystemSpec& system,
                                  const TrainOptions& options) {
  MemoryFootprint fp;
  fp.hbm_capacity = system.device.hbm_capacity;
  const bool train = task.training();
  const std::int64_t total = system.total_devices();

  double inference_act_peak = 0;
  double prev_act = 0;

  for (const auto& id : model.execution_order) {
    const LayerSpec& layer = model.layer(id);
    const PlanEntry entry = plan.entry_for(layer);
    const double shard = static_cast<double>(sharding_factor(entry, system));
    const double params = layer_param_count(layer);
    const double prec = layer.param_precision_bytes;
    const bool frozen = task.frozen_layers.count(layer.id) > 0;

    const double params_bytes = params * prec / shard;
    fp.params += params_bytes;

    if (train && !frozen) {
      if (layer.is_embedding()) {
        // Sparse updates: the gradient working set is bounded by the rows
        // touched per iteration, and by the resident shard itself. Optimizer
        // state is one scalar per row.
        const auto& e = std::get<EmbeddingBagLayer>(layer.shape);
        const double touched =
            embedding_lookup_bytes(layer, task.global_batch) / total *
            options.lookup_skew;
        fp.grads += std::min(touched, params_bytes);
        const double rows = static_cast<double>(e.num_tables) * e.rows_per_table;
        fp.optimizer_states += rows * options.emb_opt_bytes_per_row / shard;
      } else {
        fp.grads += params_bytes;
        fp.optimizer_states += params * options.opt_bytes_per_param / shard;
      }
    }

    // Activations live at the batch scope of the layer's model-parallel
    // group; MP-sharded embeddings end with their per-device sample share.
    double scope = batch_scope(entry, system, task.global_batch);
    if (has(entry, Strategy::MP_SHARD)) {
      scope = task.global_batch / static_cast<double>(total);
    }
    const double act = layer_activation_bytes(layer, scope, task.context_length);
    if (task.kind == TaskKind::Inference) {
      inference_act_peak = std::max(inference_act_peak, prev_act + act);
      prev_act = act;
    } else {
      fp.activations += act;  // retained for the backward pass
    }
  }

  if (task.kind == TaskKind::Inference) fp.activations = inference_act_peak;
  fp.total = fp.params + fp.grads + fp.optimizer_states + fp.activations;
  fp.fits = fp.total <= fp.hbm_capacity;
  return fp;
}

PlanValidation validate_plan(const ModelArch& model, const ParallelPlan& plan,
                             const TaskSpec& task, const SystemSpec& system,
                             const TrainOptions& options) {
  PlanValidation v;
  if (model.layers.empty()) {
    v.structural_violations.push_back("model has no layers");
    return v;
  }

  for (const auto& layer : model.layers) {
    const PlanEntry* entry = plan.find(layer);
    if (!entry) {
      v.structural_violations.push_back("plan does not cover layer '" +
                                        layer.id + "'");
      continue;
    }
    const bool mp_intra = entry->intra == Strategy::MP_SHARD;
    const bool mp_inter = entry->inter == Strategy::MP_SHARD;
    if ((mp_intra || mp_inter) && !layer.is_embedding()) {
      v.structural_violations.push_back("MP sharding on non-embedding layer '" +
                                        layer.id + "'");
    }
    if (mp_intra != mp_inter) {
      v.structural_violations.push_back(
          "MP sharding must span both levels on layer '" + layer.id + "'");
    }
    if (entry->intra == Strategy::TP && layer.is_embedding()) {
      v.structural_violations.push_back(
          "TP is not defined for embedding layer '" + layer.id +
          "'; use MP sharding");
    }
    if (entry->inter == Strategy::TP && layer.is_embedding()) {
      v.structural_violations.push_back(
          "TP is not defined for embedding layer '" + layer.id +
          "'; use MP sharding");
    }

    // A trainable, non-frozen layer replicated at some level needs a
    // gradient-sync strategy at that level; otherwise replicas diverge.
    const bool needs_sync =
        task.training() && task.frozen_layers.count(layer.id) == 0;
    if (needs_sync) {
      const bool intra_replicates = entry->intra == Strategy::NONE;
      const bool inter_replicates = entry->inter == Strategy::NONE;
      if ((intra_replicates && system.devices_per_node > 1) ||
          (inter_replicates && system.num_nodes > 1)) {
        v.structural_violations.push_back(
            "layer '" + layer.id +
            "' is replicated without gradient sync (NONE) at a level with >1 "
            "participants");
      }
    }
  }

  if (!v.structural_violations.empty()) return v;

  v.memory = per_device_memory(model, plan, task, system, options);
  v.ok = v.memory.fits;
  return v;
}

}  // namespace madmax
