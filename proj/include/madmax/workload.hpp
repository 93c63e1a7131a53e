// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Declarative descriptions of models, tasks, and hardware, plus the
// first-order per-layer quantities (FLOPs, parameters, bytes) derived
// from them.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace madmax {

// ---------------------------------------------------------------------------
// Layers

struct MlpLayer {
  std::int64_t in_dim = 1;
  std::int64_t out_dim = 1;
  std::int64_t num_layers = 1;  // stacked in_dim x out_dim sub-layers
};

struct EmbeddingBagLayer {
  std::int64_t num_tables = 1;
  std::int64_t rows_per_table = 1;
  std::int64_t embedding_dim = 1;
  std::int64_t lookups_per_table_per_sample = 1;
};

struct TransformerBlockLayer {
  std::int64_t hidden_dim = 1;
  std::int64_t num_heads = 1;
  std::int64_t ffn_dim = 1;
  std::int64_t num_layers = 1;  // number of blocks
};

struct LayerSpec;

struct MoeLayer {
  std::shared_ptr<const LayerSpec> expert;
  std::int64_t num_experts = 1;
  std::int64_t active_experts = 1;
};

// Opaque layer described only by its aggregate first-order quantities.
// Lets published per-sample totals drive a model without reconstructing
// proprietary layer dimensions.
struct AggregateLayer {
  double fwd_flops_per_sample = 0.0;
  double params = 0.0;
  double lookup_bytes_per_sample = 0.0;
  double activation_bytes_per_sample = 0.0;
};

using LayerShape = std::variant<MlpLayer, EmbeddingBagLayer,
                                TransformerBlockLayer, MoeLayer,
                                AggregateLayer>;

struct LayerSpec {
  std::string id;
  LayerShape shape;
  int param_precision_bytes = 4;
  int activation_precision_bytes = 4;
  // Explicit producers of this layer's input. Unset means "previous layer
  // in execution order"; an explicit empty list means the layer consumes
  // only raw features.
  std::optional<std::vector<std::string>> inputs;

  // Canonical type key, also used in plan files:
  // mlp | embedding | transformer | moe | aggregate
  std::string type_name() const;
  bool is_embedding() const;
  bool needs_context() const;
  void validate() const;  // throws std::invalid_argument
};

struct ModelArch {
  std::string name;
  std::vector<LayerSpec> layers;
  std::vector<std::string> execution_order;  // forward priority

  const LayerSpec& layer(const std::string& id) const;
  const LayerSpec* find(const std::string& id) const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Tasks

enum class TaskKind { Pretrain, Finetune, Inference };
enum class WorkUnit { Samples, Tokens };

struct TaskSpec {
  std::string name;
  TaskKind kind = TaskKind::Pretrain;
  double global_batch = 1;  // samples (sequences for token workloads)
  std::optional<std::int64_t> context_length;
  std::set<std::string> frozen_layers;  // finetune only
  WorkUnit work_unit = WorkUnit::Samples;
  double total_work = 0;  // samples or tokens; 0 = no duration projection

  bool training() const { return kind != TaskKind::Inference; }
  // Batch expressed in work units (samples, or samples * context tokens).
  double batch_units() const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Hardware

struct DeviceSpec {
  double peak_flops = 1;           // FLOP/s for the active datatype
  double compute_utilization = 0.7;
  double hbm_capacity = 1;         // bytes
  double hbm_bandwidth = 1;        // bytes/s
  double hbm_utilization = 0.8;
  void validate() const;
};

enum class CollectiveKind { All2All, AllReduce, AllGather, ReduceScatter };
enum class SpanLevel { Intra, Inter, Global };

const char* to_string(CollectiveKind k);
const char* to_string(SpanLevel s);

// Measured effective-bandwidth factor for one collective at one topology
// level, optionally restricted to messages of at least min_bytes.
struct EfficiencyEntry {
  CollectiveKind collective = CollectiveKind::AllReduce;
  SpanLevel level = SpanLevel::Intra;
  double min_bytes = 0;
  double efficiency = 1.0;  // in (0, 1]
};

struct SystemSpec {
  std::string name;
  DeviceSpec device;
  std::int64_t devices_per_node = 1;
  std::int64_t num_nodes = 1;
  double intra_node_bw = 1;  // bytes/s per device, unidirectional
  double inter_node_bw = 1;  // bytes/s per device, unidirectional
  std::vector<EfficiencyEntry> collective_efficiency;

  std::int64_t total_devices() const { return devices_per_node * num_nodes; }
  double efficiency(CollectiveKind k, SpanLevel level, double bytes) const;
  void validate() const;
};

// ---------------------------------------------------------------------------
// Derived quantities

// Forward FLOPs for one layer at the given sample count. context_length is
// required for transformer blocks (and MoE layers wrapping them).
double layer_fwd_flops(const LayerSpec& layer, double local_batch,
                       std::optional<std::int64_t> context_length = {});

double layer_param_count(const LayerSpec& layer);

// HBM traffic for embedding lookups (EmbeddingBag or Aggregate layers).
double embedding_lookup_bytes(const LayerSpec& layer, double local_batch);

// Output-tensor bytes of one layer (pooled output for embedding bags).
double layer_activation_bytes(const LayerSpec& layer, double local_batch,
                              std::optional<std::int64_t> context_length = {});

// Partial-sum traffic per device for a tensor-parallel pass over this layer:
// every sub-layer's output is aggregated, so bytes scale with sub-layer count.
double tp_partial_sum_bytes(const LayerSpec& layer, double local_batch,
                            std::optional<std::int64_t> context_length = {});

struct HardwareScaling {
  double compute = 1.0;
  double hbm_capacity = 1.0;
  double hbm_bw = 1.0;
  double intra_bw = 1.0;
  double inter_bw = 1.0;
};

// Returns a copy of the system with the selected components multiplied.
SystemSpec scale_hardware(const SystemSpec& system, const HardwareScaling& f);

}  // namespace madmax
