// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0

#include "madmax/workload.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace madmax {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

void require(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

std::int64_t require_context(const LayerSpec& layer,
                             std::optional<std::int64_t> context) {
  if (!context || *context < 1) {
    fail("layer '" + layer.id + "': context_length required for transformer layers");
  }
  return *context;
}

}  // namespace

std::string LayerSpec::type_name() const {
  struct V {
    std::string operator()(const MlpLayer&) const { return "mlp"; }
    std::string operator()(const EmbeddingBagLayer&) const { return "embedding"; }
    std::string operator()(const TransformerBlockLayer&) const { return "transformer"; }
    std::string operator()(const MoeLayer&) const { return "moe"; }
    std::string operator()(const AggregateLayer&) const { return "aggregate"; }
  };
  return std::visit(V{}, shape);
}

bool LayerSpec::is_embedding() const {
  return std::holds_alternative<EmbeddingBagLayer>(shape);
}

bool LayerSpec::needs_context() const {
  if (std::holds_alternative<TransformerBlockLayer>(shape)) return true;
  if (const auto* moe = std::get_if<MoeLayer>(&shape)) {
    return moe->expert && moe->expert->needs_context();
  }
  return false;
}

void LayerSpec::validate() const {
  require(!id.empty(), "layer id must be non-empty");
  require(param_precision_bytes == 1 || param_precision_bytes == 2 ||
              param_precision_bytes == 4,
          "layer '" + id + "': param_precision_bytes must be 1, 2 or 4");
  require(activation_precision_bytes == 1 || activation_precision_bytes == 2 ||
              activation_precision_bytes == 4,
          "layer '" + id + "': activation_precision_bytes must be 1, 2 or 4");
  if (const auto* m = std::get_if<MlpLayer>(&shape)) {
    require(m->in_dim >= 1 && m->out_dim >= 1 && m->num_layers >= 1,
            "layer '" + id + "': mlp dims must be >= 1");
  } else if (const auto* e = std::get_if<EmbeddingBagLayer>(&shape)) {
    require(e->num_tables >= 1 && e->rows_per_table >= 1 &&
                e->embedding_dim >= 1 && e->lookups_per_table_per_sample >= 1,
            "layer '" + id + "': embedding dims must be >= 1");
  } else if (const auto* t = std::get_if<TransformerBlockLayer>(&shape)) {
    require(t->hidden_dim >= 1 && t->num_heads >= 1 && t->ffn_dim >= 1 &&
                t->num_layers >= 1,
            "layer '" + id + "': transformer dims must be >= 1");
  } else if (const auto* mo = std::get_if<MoeLayer>(&shape)) {
    require(mo->expert != nullptr, "layer '" + id + "': moe expert missing");
    require(mo->num_experts >= 1 && mo->active_experts >= 1,
            "layer '" + id + "': expert counts must be >= 1");
    require(mo->active_experts <= mo->num_experts,
            "layer '" + id + "': active_experts must be <= num_experts");
    mo->expert->validate();
  } else if (const auto* a = std::get_if<AggregateLayer>(&shape)) {
    require(a->fwd_flops_per_sample >= 0 && a->params >= 0 &&
                a->lookup_bytes_per_sample >= 0 &&
                a->activation_bytes_per_sample >= 0,
            "layer '" + id + "': aggregate fields must be >= 0");
  }
}

const LayerSpec& ModelArch::layer(const std::string& id) const {
  const LayerSpec* l = find(id);
  if (!l) fail("model '" + name + "': unknown layer id '" + id + "'");
  return *l;
}

const LayerSpec* ModelArch::find(const std::string& id) const {
  for (const auto& l : layers) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

void ModelArch::validate() const {
  require(!layers.empty(), "model '" + name + "': must have at least one layer");
  std::set<std::string> ids;
  for (const auto& l : layers) {
    l.validate();
    require(ids.insert(l.id).second,
            "model '" + name + "': duplicate layer id '" + l.id + "'");
    if (l.inputs) {
      for (const auto& in : *l.inputs) {
        require(std::any_of(layers.begin(), layers.end(),
                            [&](const LayerSpec& o) { return o.id == in; }),
                "layer '" + l.id + "': unknown input '" + in + "'");
      }
    }
  }
  require(execution_order.size() == layers.size(),
          "model '" + name + "': execution_order must be a permutation of layer ids");
  std::set<std::string> order(execution_order.begin(), execution_order.end());
  require(order == ids,
          "model '" + name + "': execution_order must be a permutation of layer ids");
}

double TaskSpec::batch_units() const {
  if (work_unit == WorkUnit::Tokens) {
    return global_batch * static_cast<double>(context_length.value_or(1));
  }
  return global_batch;
}

void TaskSpec::validate() const {
  require(global_batch >= 1, "task '" + name + "': global_batch must be >= 1");
  require(total_work >= 0, "task '" + name + "': total_work must be >= 0");
  if (context_length) {
    require(*context_length >= 1,
            "task '" + name + "': context_length must be >= 1");
  }
  if (kind != TaskKind::Finetune) {
    require(frozen_layers.empty(),
            "task '" + name + "': frozen_layers only valid for finetune");
  }
  if (work_unit == WorkUnit::Tokens) {
    require(context_length.has_value(),
            "task '" + name + "': token work unit requires context_length");
  }
}

void DeviceSpec::validate() const {
  require(peak_flops > 0, "device: peak_flops must be > 0");
  require(hbm_capacity > 0, "device: hbm_capacity must be > 0");
  require(hbm_bandwidth > 0, "device: hbm_bandwidth must be > 0");
  require(compute_utilization > 0 && compute_utilization <= 1,
          "device: compute_utilization must be in (0,1]");
  require(hbm_utilization > 0 && hbm_utilization <= 1,
          "device: hbm_utilization must be in (0,1]");
}

const char* to_string(CollectiveKind k) {
  switch (k) {
    case CollectiveKind::All2All: return "All2All";
    case CollectiveKind::AllReduce: return "AllReduce";
    case CollectiveKind::AllGather: return "AllGather";
    case CollectiveKind::ReduceScatter: return "ReduceScatter";
  }
  return "?";
}

const char* to_string(SpanLevel s) {
  switch (s) {
    case SpanLevel::Intra: return "intra";
    case SpanLevel::Inter: return "inter";
    case SpanLevel::Global: return "global";
  }
  return "?";
}

double SystemSpec::efficiency(CollectiveKind k, SpanLevel level,
                              double bytes) const {
  // Largest min_bytes bucket that the message clears wins.
  double eff = 1.0;
  double best_min = -1.0;
  for (const auto& e : collective_efficiency) {
    if (e.collective != k || e.level != level) continue;
    if (bytes >= e.min_bytes && e.min_bytes > best_min) {
      best_min = e.min_bytes;
      eff = e.efficiency;
    }
  }
  return eff;
}

void SystemSpec::validate() const {
  device.validate();
  require(devices_per_node >= 1, "system: devices_per_node must be >= 1");
  require(num_nodes >= 1, "system: num_nodes must be >= 1");
  require(intra_node_bw > 0, "system: intra_node_bw must be > 0");
  require(inter_node_bw > 0, "system: inter_node_bw must be > 0");
  for (const auto& e : collective_efficiency) {
    require(e.efficiency > 0 && e.efficiency <= 1,
            "system: collective efficiency must be in (0,1]");
    require(e.min_bytes >= 0, "system: efficiency min_bytes must be >= 0");
  }
}

// ---------------------------------------------------------------------------

double layer_fwd_flops(const LayerSpec& layer, double local_batch,
                       std::optional<std::int64_t> context_length) {
  require(local_batch >= 1, "layer '" + layer.id + "': batch must be >= 1");
  struct V {
    const LayerSpec& layer;
    double batch;
    std::optional<std::int64_t> ctx;

    double operator()(const MlpLayer& m) const {
      return 2.0 * m.in_dim * m.out_dim * m.num_layers * batch;
    }
    double operator()(const EmbeddingBagLayer&) const {
      return 0.0;  // bandwidth-bound
    }
    double operator()(const TransformerBlockLayer& t) const {
      const double L = static_cast<double>(require_context(layer, ctx));
      const double d = static_cast<double>(t.hidden_dim);
      const double f = static_cast<double>(t.ffn_dim);
      // Per token: QKV+output projections 8d^2, feed-forward 4dF
      // (24d^2 at F=4d); attention scores add 4Ld per token.
      const double per_token = 8.0 * d * d + 4.0 * d * f + 4.0 * L * d;
      return batch * L * per_token * t.num_layers;
    }
    double operator()(const MoeLayer& mo) const {
      const double expert = layer_fwd_flops(*mo.expert, batch, ctx);
      return static_cast<double>(mo.active_experts) * expert;
    }
    double operator()(const AggregateLayer& a) const {
      return a.fwd_flops_per_sample * batch;
    }
  };
  return std::visit(V{layer, local_batch, context_length}, layer.shape);
}

double layer_param_count(const LayerSpec& layer) {
  struct V {
    double operator()(const MlpLayer& m) const {
      return static_cast<double>(m.num_layers) *
             (static_cast<double>(m.in_dim) * m.out_dim + m.out_dim);
    }
    double operator()(const EmbeddingBagLayer& e) const {
      return static_cast<double>(e.num_tables) * e.rows_per_table *
             e.embedding_dim;
    }
    double operator()(const TransformerBlockLayer& t) const {
      const double d = static_cast<double>(t.hidden_dim);
      const double f = static_cast<double>(t.ffn_dim);
      // 12d^2 per block at F=4d: 4d^2 attention + 2dF feed-forward.
      return static_cast<double>(t.num_layers) * (4.0 * d * d + 2.0 * d * f);
    }
    double operator()(const MoeLayer& mo) const {
      return static_cast<double>(mo.num_experts) * layer_param_count(*mo.expert);
    }
    double operator()(const AggregateLayer& a) const { return a.params; }
  };
  return std::visit(V{}, layer.shape);
}

double embedding_lookup_bytes(const LayerSpec& layer, double local_batch) {
  require(local_batch >= 0, "layer '" + layer.id + "': batch must be >= 0");
  if (const auto* e = std::get_if<EmbeddingBagLayer>(&layer.shape)) {
    return static_cast<double>(e->num_tables) * e->lookups_per_table_per_sample *
           e->embedding_dim * layer.param_precision_bytes * local_batch;
  }
  if (const auto* a = std::get_if<AggregateLayer>(&layer.shape)) {
    return a->lookup_bytes_per_sample * local_batch;
  }
  fail("layer '" + layer.id + "': lookup bytes only defined for embedding layers");
}

double layer_activation_bytes(const LayerSpec& layer, double local_batch,
                              std::optional<std::int64_t> context_length) {
  require(local_batch >= 0, "layer '" + layer.id + "': batch must be >= 0");
  struct V {
    const LayerSpec& layer;
    double batch;
    std::optional<std::int64_t> ctx;
    double prec() const { return layer.activation_precision_bytes; }

    double operator()(const MlpLayer& m) const {
      return static_cast<double>(m.out_dim) * batch * prec();
    }
    double operator()(const EmbeddingBagLayer& e) const {
      // Pooled output: one vector per table per sample.
      return static_cast<double>(e.num_tables) * e.embedding_dim * batch * prec();
    }
    double operator()(const TransformerBlockLayer& t) const {
      const double L = static_cast<double>(require_context(layer, ctx));
      return static_cast<double>(t.hidden_dim) * L * batch * prec();
    }
    double operator()(const MoeLayer& mo) const {
      return layer_activation_bytes(*mo.expert, batch, ctx);
    }
    double operator()(const AggregateLayer& a) const {
      return a.activation_bytes_per_sample * batch;
    }
  };
  return std::visit(V{layer, local_batch, context_length}, layer.shape);
}

double tp_partial_sum_bytes(const LayerSpec& layer, double local_batch,
                            std::optional<std::int64_t> context_length) {
  struct V {
    const LayerSpec& layer;
    double batch;
    std::optional<std::int64_t> ctx;
    double prec() const { return layer.activation_precision_bytes; }

    double operator()(const MlpLayer& m) const {
      // One aggregation per sub-layer output.
      return static_cast<double>(m.num_layers) * m.out_dim * batch * prec();
    }
    double operator()(const EmbeddingBagLayer&) const { return 0.0; }
    double operator()(const TransformerBlockLayer& t) const {
      const double L = static_cast<double>(require_context(layer, ctx));
      // Two aggregations per block (attention output, feed-forward output).
      return 2.0 * t.num_layers * t.hidden_dim * L * batch * prec();
    }
    double operator()(const MoeLayer& mo) const {
      return static_cast<double>(mo.active_experts) *
             tp_partial_sum_bytes(*mo.expert, batch, ctx);
    }
    double operator()(const AggregateLayer& a) const {
      return a.activation_bytes_per_sample * batch;
    }
  };
  return std::visit(V{layer, local_batch, context_length}, layer.shape);
}

SystemSpec scale_hardware(const SystemSpec& system, const HardwareScaling& f) {
  require(f.compute > 0 && f.hbm_capacity > 0 && f.hbm_bw > 0 &&
              f.intra_bw > 0 && f.inter_bw > 0,
          "scale_hardware: factors must be > 0");
  SystemSpec s = system;
  s.device.peak_flops *= f.compute;
  s.device.hbm_capacity *= f.hbm_capacity;
  s.device.hbm_bandwidth *= f.hbm_bw;
  s.intra_node_bw *= f.intra_bw;
  s.inter_node_bw *= f.inter_bw;
  s.validate();
  return s;
}

}  // namespace madmax
