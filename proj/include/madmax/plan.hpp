// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Parallelization strategies, hierarchical plan encoding, derived sharding
// factors, required communication collectives, and per-device memory.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "madmax/workload.hpp"

namespace madmax {

enum class Strategy { DDP, FSDP, TP, MP_SHARD, NONE };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

// Ordered (intra-node, inter-node) strategy pair.
struct PlanEntry {
  Strategy intra = Strategy::NONE;
  Strategy inter = Strategy::NONE;

  bool operator==(const PlanEntry&) const = default;
  std::string to_string() const;  // "(TP,DDP)"; "(MP)" for global sharding
};

struct ParallelPlan {
  // Keyed by layer type name (mlp, embedding, transformer, moe, aggregate).
  std::map<std::string, PlanEntry> by_type;
  // Per-layer-id overrides take precedence over by_type.
  std::map<std::string, PlanEntry> by_id;
  bool fsdp_prefetch = false;

  const PlanEntry* find(const LayerSpec& layer) const;
  // Throws if the layer is not covered.
  PlanEntry entry_for(const LayerSpec& layer) const;
  std::string to_string() const;
};

enum class Phase { Forward, Backward };
const char* to_string(Phase p);

struct CollectiveReq {
  CollectiveKind kind = CollectiveKind::AllReduce;
  // For AllGather/ReduceScatter this is the per-device shard; for AllReduce
  // the per-device buffer; for All2All the per-device send volume.
  double bytes_per_device = 0;
  Phase phase = Phase::Forward;
  bool blocking = true;
  SpanLevel level = SpanLevel::Global;
  std::string source_layer;
};

struct MemoryFootprint {
  double params = 0;
  double grads = 0;
  double optimizer_states = 0;
  double activations = 0;
  double total = 0;
  bool fits = false;
  double hbm_capacity = 0;
  double overage() const { return fits ? 0.0 : total - hbm_capacity; }
};

// Knobs the cost formulas leave unquantified; defaults follow common
// production setups.
struct TrainOptions {
  double bwd_flops_multiplier = 2.0;   // backward compute vs forward
  double opt_bytes_per_param = 8.0;    // dense layers (two fp32 moments)
  double emb_opt_bytes_per_row = 4.0;  // row-wise adaptive optimizer
  double lookup_skew = 1.0;            // per-device lookup imbalance factor
  // Wire precision for parameter-gradient sync (DDP AllReduce and FSDP
  // ReduceScatter); 0 keeps the layer's parameter precision.
  double grad_comm_precision_bytes = 0;
  bool moe_all2all_blocking = true;
};

// Product of level sizes where the strategy shards parameters.
std::int64_t sharding_factor(const PlanEntry& entry, const SystemSpec& system);

// Product of level sizes where the strategy partitions the batch.
std::int64_t data_parallel_factor(const PlanEntry& entry,
                                  const SystemSpec& system);

// Samples processed by this device's model-parallel group per iteration.
double batch_scope(const PlanEntry& entry, const SystemSpec& system,
                   double global_batch);

std::vector<CollectiveReq> required_collectives(const LayerSpec& layer,
                                                const PlanEntry& entry,
                                                const TaskSpec& task,
                                                const SystemSpec& system,
                                                const TrainOptions& options);

MemoryFootprint per_device_memory(const ModelArch& model,
                                  const ParallelPlan& plan,
                                  const TaskSpec& task,
                                  const SystemSpec& system,
                                  const TrainOptions& options);

struct PlanValidation {
  bool ok = false;
  std::vector<std::string> structural_violations;
  MemoryFootprint memory;  // populated when structure is sound

  bool structural_ok() const { return structural_violations.empty(); }
};

// Never clamps: infeasibility (OOM byte overage or structural violation)
// is reported as data.
PlanValidation validate_plan(const ModelArch& model, const ParallelPlan& plan,
                             const TaskSpec& task, const SystemSpec& system,
                             const TrainOptions& options);

}  // namespace madmax
