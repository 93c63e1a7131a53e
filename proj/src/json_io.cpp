// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0

#include "madmax/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace madmax {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

const json& member(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (!v.is_number()) fail(where + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<double>();
}

std::int64_t integer(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (!v.is_number()) fail(where + "." + key + ": expected an integer");
  return v.get<std::int64_t>();
}

std::string text(const json& j, const char* key, const std::string& where) {
  const json& v = member(j, key, where);
  if (!v.is_string()) fail(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

void check_schema(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where + ": expected a JSON object");
  const std::string v = text(j, "schema_version", where);
  if (v != "1") fail(where + ": unsupported schema_version '" + v + "'");
}

LayerSpec parse_layer(const json& j, const std::string& where);

LayerShape parse_shape(const json& j, const std::string& kind,
                       const std::string& where) {
  if (kind == "mlp") {
    MlpLayer m;
    m.in_dim = integer(j, "in_dim", where);
    m.out_dim = integer(j, "out_dim", where);
    m.num_layers = integer(j, "num_layers", where);
    return m;
  }
  if (kind == "embedding_bag") {
    EmbeddingBagLayer e;
    e.num_tables = integer(j, "num_tables", where);
    e.rows_per_table = integer(j, "rows_per_table", where);
    e.embedding_dim = integer(j, "embedding_dim", where);
    e.lookups_per_table_per_sample =
        integer(j, "lookups_per_table_per_sample", where);
    return e;
  }
  if (kind == "transformer_block") {
    TransformerBlockLayer t;
    t.hidden_dim = integer(j, "hidden_dim", where);
    t.num_heads = integer(j, "num_heads", where);
    t.ffn_dim = integer(j, "ffn_dim", where);
    t.num_layers = integer(j, "num_layers", where);
    return t;
  }
  if (kind == "moe") {
    MoeLayer m;
    m.num_experts = integer(j, "num_experts", where);
    m.active_experts = integer(j, "active_experts", where);
    m.expert = std::make_shared<LayerSpec>(
        parse_layer(member(j, "expert", where), where + ".expert"));
    return m;
  }
  if (kind == "aggregate") {
    AggregateLayer a;
    a.fwd_flops_per_sample = number(j, "fwd_flops_per_sample", where);
    a.params = number(j, "params", where);
    a.lookup_bytes_per_sample = number_or(j, "lookup_bytes_per_sample", 0);
    a.activation_bytes_per_sample =
        number_or(j, "activation_bytes_per_sample", 0);
    return a;
  }
  fail(where + ": unknown layer kind '" + kind + "'");
}

LayerSpec parse_layer(const json& j, const std::string& where) {
  LayerSpec l;
  l.id = text(j, "id", where);
  const std::string kind = text(j, "kind", where);
  l.shape = parse_shape(j, kind, where + "(" + l.id + ")");
  l.param_precision_bytes =
      static_cast<int>(number_or(j, "param_precision_bytes", 4));
  l.activation_precision_bytes =
      static_cast<int>(number_or(j, "activation_precision_bytes", 4));
  if (auto it = j.find("inputs"); it != j.end() && !it->is_null()) {
    std::vector<std::string> inputs;
    for (const auto& in : *it) inputs.push_back(in.get<std::string>());
    l.inputs = std::move(inputs);
  }
  return l;
}

const char* kind_string(const LayerShape& shape) {
  struct V {
    const char* operator()(const MlpLayer&) const { return "mlp"; }
    const char* operator()(const EmbeddingBagLayer&) const { return "embedding_bag"; }
    const char* operator()(const TransformerBlockLayer&) const { return "transformer_block"; }
    const char* operator()(const MoeLayer&) const { return "moe"; }
    const char* operator()(const AggregateLayer&) const { return "aggregate"; }
  };
  return std::visit(V{}, shape);
}

json layer_to_json(const LayerSpec& l) {
  json j;
  j["id"] = l.id;
  j["kind"] = kind_string(l.shape);
  if (const auto* m = std::get_if<MlpLayer>(&l.shape)) {
    j["in_dim"] = m->in_dim;
    j["out_dim"] = m->out_dim;
    j["num_layers"] = m->num_layers;
  } else if (const auto* e = std::get_if<EmbeddingBagLayer>(&l.shape)) {
    j["num_tables"] = e->num_tables;
    j["rows_per_table"] = e->rows_per_table;
    j["embedding_dim"] = e->embedding_dim;
    j["lookups_per_table_per_sample"] = e->lookups_per_table_per_sample;
  } else if (const auto* t = std::get_if<TransformerBlockLayer>(&l.shape)) {
    j["hidden_dim"] = t->hidden_dim;
    j["num_heads"] = t->num_heads;
    j["ffn_dim"] = t->ffn_dim;
    j["num_layers"] = t->num_layers;
  } else if (const auto* mo = std::get_if<MoeLayer>(&l.shape)) {
    j["num_experts"] = mo->num_experts;
    j["active_experts"] = mo->active_experts;
    j["expert"] = layer_to_json(*mo->expert);
  } else if (const auto* a = std::get_if<AggregateLayer>(&l.shape)) {
    j["fwd_flops_per_sample"] = a->fwd_flops_per_sample;
    j["params"] = a->params;
    j["lookup_bytes_per_sample"] = a->lookup_bytes_per_sample;
    j["activation_bytes_per_sample"] = a->activation_bytes_per_sample;
  }
  j["param_precision_bytes"] = l.param_precision_bytes;
  j["activation_precision_bytes"] = l.activation_precision_bytes;
  if (l.inputs) j["inputs"] = *l.inputs;
  return j;
}

SpanLevel level_from_string(const std::string& s, const std::string& where) {
  if (s == "intra") return SpanLevel::Intra;
  if (s == "inter") return SpanLevel::Inter;
  if (s == "global") return SpanLevel::Global;
  fail(where + ": unknown level '" + s + "'");
}

CollectiveKind collective_from_string(const std::string& s,
                                      const std::string& where) {
  if (s == "all2all" || s == "All2All") return CollectiveKind::All2All;
  if (s == "allreduce" || s == "AllReduce") return CollectiveKind::AllReduce;
  if (s == "allgather" || s == "AllGather") return CollectiveKind::AllGather;
  if (s == "reducescatter" || s == "ReduceScatter") {
    return CollectiveKind::ReduceScatter;
  }
  fail(where + ": unknown collective '" + s + "'");
}

const char* collective_key(CollectiveKind k) {
  switch (k) {
    case CollectiveKind::All2All: return "all2all";
    case CollectiveKind::AllReduce: return "allreduce";
    case CollectiveKind::AllGather: return "allgather";
    case CollectiveKind::ReduceScatter: return "reducescatter";
  }
  return "?";
}

PlanEntry parse_plan_entry(const json& j, const std::string& where) {
  PlanEntry e;
  if (j.contains("shard")) {
    const std::string s = j["shard"].get<std::string>();
    if (s != "MP" && s != "MP_SHARD") {
      fail(where + ": shard must be \"MP\"");
    }
    e.intra = e.inter = Strategy::MP_SHARD;
    return e;
  }
  e.intra = strategy_from_string(text(j, "intra", where));
  e.inter = strategy_from_string(text(j, "inter", where));
  return e;
}

json plan_entry_to_json(const PlanEntry& e) {
  if (e.intra == Strategy::MP_SHARD && e.inter == Strategy::MP_SHARD) {
    return json{{"shard", "MP"}};
  }
  return json{{"intra", to_string(e.intra)}, {"inter", to_string(e.inter)}};
}

}  // namespace

ModelArch parse_model_json(const std::string& textjson) {
  json j = json::parse(textjson);
  const std::string where = "model";
  check_schema(j, where);
  ModelArch m;
  m.name = text(j, "name", where);
  const json& layers = member(j, "layers", where);
  if (!layers.is_array() || layers.empty()) {
    fail(where + ".layers: expected a non-empty array");
  }
  for (const auto& lj : layers) {
    m.layers.push_back(parse_layer(lj, where + ".layers"));
  }
  for (const auto& id : member(j, "execution_order", where)) {
    m.execution_order.push_back(id.get<std::string>());
  }
  m.validate();
  return m;
}

SystemSpec parse_system_json(const std::string& textjson) {
  json j = json::parse(textjson);
  const std::string where = "system";
  check_schema(j, where);
  SystemSpec s;
  s.name = text(j, "name", where);
  const json& d = member(j, "device", where);
  s.device.peak_flops = number(d, "peak_flops", where + ".device");
  s.device.compute_utilization =
      number_or(d, "compute_utilization", s.device.compute_utilization);
  s.device.hbm_capacity = number(d, "hbm_capacity", where + ".device");
  s.device.hbm_bandwidth = number(d, "hbm_bandwidth", where + ".device");
  s.device.hbm_utilization =
      number_or(d, "hbm_utilization", s.device.hbm_utilization);
  s.devices_per_node = integer(j, "devices_per_node", where);
  s.num_nodes = integer(j, "num_nodes", where);
  s.intra_node_bw = number(j, "intra_node_bw", where);
  s.inter_node_bw = number(j, "inter_node_bw", where);
  if (auto it = j.find("collective_efficiency"); it != j.end()) {
    for (const auto& ej : *it) {
      EfficiencyEntry e;
      const std::string w = where + ".collective_efficiency";
      e.collective = collective_from_string(text(ej, "collective", w), w);
      e.level = level_from_string(text(ej, "level", w), w);
      e.min_bytes = number_or(ej, "min_bytes", 0);
      e.efficiency = number(ej, "efficiency", w);
      s.collective_efficiency.push_back(e);
    }
  }
  s.validate();
  return s;
}

TaskFile parse_task_json(const std::string& textjson) {
  json j = json::parse(textjson);
  const std::string where = "task";
  check_schema(j, where);
  TaskFile f;
  f.task.name = text(j, "name", where);
  const std::string kind = text(j, "kind", where);
  if (kind == "pretrain") {
    f.task.kind = TaskKind::Pretrain;
  } else if (kind == "finetune") {
    f.task.kind = TaskKind::Finetune;
  } else if (kind == "inference") {
    f.task.kind = TaskKind::Inference;
  } else {
    fail(where + ".kind: expected pretrain|finetune|inference");
  }
  f.task.global_batch = number(j, "global_batch", where);
  if (auto it = j.find("context_length"); it != j.end() && !it->is_null()) {
    f.task.context_length = it->get<std::int64_t>();
  }
  if (auto it = j.find("frozen_layers"); it != j.end() && !it->is_null()) {
    for (const auto& id : *it) {
      f.task.frozen_layers.insert(id.get<std::string>());
    }
  }
  const std::string unit =
      j.contains("work_unit") ? j["work_unit"].get<std::string>() : "samples";
  if (unit == "samples") {
    f.task.work_unit = WorkUnit::Samples;
  } else if (unit == "tokens") {
    f.task.work_unit = WorkUnit::Tokens;
  } else {
    fail(where + ".work_unit: expected samples|tokens");
  }
  f.task.total_work = number_or(j, "total_work", 0);
  f.task.validate();

  if (auto it = j.find("plan"); it != j.end() && !it->is_null()) {
    for (const auto& [key, entry] : it->items()) {
      const std::string w = where + ".plan." + key;
      // Keys are layer type names; "<type>:<id>" or a bare layer id pins a
      // single layer.
      if (key.rfind("layer:", 0) == 0) {
        f.plan.by_id[key.substr(6)] = parse_plan_entry(entry, w);
      } else {
        f.plan.by_type[key] = parse_plan_entry(entry, w);
      }
    }
  }
  f.plan.fsdp_prefetch =
      j.contains("fsdp_prefetch") && j["fsdp_prefetch"].get<bool>();

  if (auto it = j.find("options"); it != j.end() && !it->is_null()) {
    const json& o = *it;
    f.options.bwd_flops_multiplier =
        number_or(o, "bwd_flops_multiplier", f.options.bwd_flops_multiplier);
    f.options.opt_bytes_per_param =
        number_or(o, "opt_bytes_per_param", f.options.opt_bytes_per_param);
    f.options.emb_opt_bytes_per_row =
        number_or(o, "emb_opt_bytes_per_row", f.options.emb_opt_bytes_per_row);
    f.options.lookup_skew = number_or(o, "lookup_skew", f.options.lookup_skew);
    f.options.grad_comm_precision_bytes =
        number_or(o, "grad_comm_precision_bytes",
                  f.options.grad_comm_precision_bytes);
    if (o.contains("moe_all2all_blocking")) {
      f.options.moe_all2all_blocking = o["moe_all2all_blocking"].get<bool>();
    }
  }

  if (auto it = j.find("sweep"); it != j.end() && !it->is_null()) {
    SweepDomain d;
    for (const auto& t : member(*it, "layer_types", where + ".sweep")) {
      d.layer_types.push_back(t.get<std::string>());
    }
    auto strategies = [&](const char* key) {
      std::vector<Strategy> out;
      if (auto s = it->find(key); s != it->end()) {
        for (const auto& v : *s) {
          out.push_back(strategy_from_string(v.get<std::string>()));
        }
      }
      return out;
    };
    if (auto s = strategies("strategies"); !s.empty()) d.strategies = s;
    d.intra_strategies = strategies("intra_strategies");
    d.inter_strategies = strategies("inter_strategies");
    f.sweep = std::move(d);
  }

  if (auto it = j.find("report_steps"); it != j.end() && !it->is_null()) {
    f.report_steps = it->get<double>();
  }
  return f;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename F>
auto load_with_context(const std::string& path, F&& parse) {
  try {
    return parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace

ModelArch load_model_file(const std::string& path) {
  return load_with_context(path, [](const std::string& s) {
    return parse_model_json(s);
  });
}

SystemSpec load_system_file(const std::string& path) {
  return load_with_context(path, [](const std::string& s) {
    return parse_system_json(s);
  });
}

TaskFile load_task_file(const std::string& path) {
  return load_with_context(path, [](const std::string& s) {
    return parse_task_json(s);
  });
}

std::string resolve_input_path(const std::string& name_or_path,
                               const char* category) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path)) return name_or_path;

  std::vector<fs::path> roots;
  if (const char* env = std::getenv("MADMAX_FIXTURES")) {
    roots.emplace_back(env);
  }
  roots.emplace_back("fixtures");
  for (const auto& root : roots) {
    for (const auto& sub :
         {fs::path{}, fs::path{category}, fs::path{"models"},
          fs::path{"systems"}, fs::path{"tasks"}}) {
      for (const auto& name : {name_or_path, name_or_path + ".json"}) {
        const fs::path candidate = root / sub / name;
        if (fs::exists(candidate)) return candidate.string();
      }
    }
  }
  throw std::runtime_error(std::string("cannot find ") + category + " file '" +
                           name_or_path +
                           "' (set MADMAX_FIXTURES or pass a path)");
}

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double round_g6(double v) { return std::strtod(format_g6(v).c_str(), nullptr); }

std::string serialize_model(const ModelArch& m) {
  json j;
  j["schema_version"] = "1";
  j["name"] = m.name;
  j["layers"] = json::array();
  for (const auto& l : m.layers) j["layers"].push_back(layer_to_json(l));
  j["execution_order"] = m.execution_order;
  return j.dump(2) + "\n";
}

std::string serialize_system(const SystemSpec& s) {
  json j;
  j["schema_version"] = "1";
  j["name"] = s.name;
  j["device"] = json{{"peak_flops", s.device.peak_flops},
                     {"compute_utilization", s.device.compute_utilization},
                     {"hbm_capacity", s.device.hbm_capacity},
                     {"hbm_bandwidth", s.device.hbm_bandwidth},
                     {"hbm_utilization", s.device.hbm_utilization}};
  j["devices_per_node"] = s.devices_per_node;
  j["num_nodes"] = s.num_nodes;
  j["intra_node_bw"] = s.intra_node_bw;
  j["inter_node_bw"] = s.inter_node_bw;
  if (!s.collective_efficiency.empty()) {
    json arr = json::array();
    for (const auto& e : s.collective_efficiency) {
      arr.push_back(json{{"collective", collective_key(e.collective)},
                         {"level", to_string(e.level)},
                         {"min_bytes", e.min_bytes},
                         {"efficiency", e.efficiency}});
    }
    j["collective_efficiency"] = arr;
  }
  return j.dump(2) + "\n";
}

std::string serialize_task(const TaskFile& f) {
  json j;
  j["schema_version"] = "1";
  j["name"] = f.task.name;
  switch (f.task.kind) {
    case TaskKind::Pretrain: j["kind"] = "pretrain"; break;
    case TaskKind::Finetune: j["kind"] = "finetune"; break;
    case TaskKind::Inference: j["kind"] = "inference"; break;
  }
  j["global_batch"] = f.task.global_batch;
  if (f.task.context_length) j["context_length"] = *f.task.context_length;
  if (!f.task.frozen_layers.empty()) {
    j["frozen_layers"] = f.task.frozen_layers;
  }
  j["work_unit"] = f.task.work_unit == WorkUnit::Tokens ? "tokens" : "samples";
  if (f.task.total_work > 0) j["total_work"] = f.task.total_work;
  json plan;
  for (const auto& [type, entry] : f.plan.by_type) {
    plan[type] = plan_entry_to_json(entry);
  }
  for (const auto& [id, entry] : f.plan.by_id) {
    plan["layer:" + id] = plan_entry_to_json(entry);
  }
  j["plan"] = plan;
  j["fsdp_prefetch"] = f.plan.fsdp_prefetch;
  j["options"] = json{{"bwd_flops_multiplier", f.options.bwd_flops_multiplier},
                      {"opt_bytes_per_param", f.options.opt_bytes_per_param},
                      {"emb_opt_bytes_per_row", f.options.emb_opt_bytes_per_row},
                      {"lookup_skew", f.options.lookup_skew},
                      {"grad_comm_precision_bytes",
                       f.options.grad_comm_precision_bytes},
                      {"moe_all2all_blocking", f.options.moe_all2all_blocking}};
  if (f.sweep) {
    json sweep;
    sweep["layer_types"] = f.sweep->layer_types;
    json strategies = json::array();
    for (Strategy s : f.sweep->strategies) strategies.push_back(to_string(s));
    sweep["strategies"] = strategies;
    if (!f.sweep->intra_strategies.empty()) {
      json arr = json::array();
      for (Strategy s : f.sweep->intra_strategies) arr.push_back(to_string(s));
      sweep["intra_strategies"] = arr;
    }
    if (!f.sweep->inter_strategies.empty()) {
      json arr = json::array();
      for (Strategy s : f.sweep->inter_strategies) arr.push_back(to_string(s));
      sweep["inter_strategies"] = arr;
    }
    j["sweep"] = sweep;
  }
  if (f.report_steps) j["report_steps"] = *f.report_steps;
  return j.dump(2) + "\n";
}

namespace {

json memory_to_json(const MemoryFootprint& m) {
  return json{{"params_bytes", round_g6(m.params)},
              {"grads_bytes", round_g6(m.grads)},
              {"optimizer_state_bytes", round_g6(m.optimizer_states)},
              {"activation_bytes", round_g6(m.activations)},
              {"total_bytes", round_g6(m.total)},
              {"hbm_capacity_bytes", round_g6(m.hbm_capacity)},
              {"fits", m.fits},
              {"overage_bytes", round_g6(m.overage())}};
}

}  // namespace

json report_to_json(const Scenario& scenario, const PlanResult& result,
                    std::optional<double> report_steps) {
  json j;
  j["schema_version"] = "1";
  j["model"] = scenario.model->name;
  j["system"] = scenario.system->name;
  j["task"] = scenario.task->name;
  j["plan"] = result.plan_string;
  j["feasible"] = result.feasible;
  j["memory"] = memory_to_json(result.validation.memory);
  if (!result.validation.structural_violations.empty()) {
    j["structural_violations"] = result.validation.structural_violations;
  }
  if (result.summary) {
    const ReportSummary& s = *result.summary;
    j["serialized_iter_time_ms"] = round_g6(s.serialized_iter_time * 1e3);
    j["overlapped_iter_time_ms"] = round_g6(s.overlapped_iter_time * 1e3);
    const char* unit = s.throughput_unit == WorkUnit::Tokens
                           ? "tokens_per_s"
                           : "samples_per_s";
    j["throughput"] = round_g6(s.throughput);
    j["throughput_unit"] = unit;
    if (s.throughput_unit == WorkUnit::Samples) {
      j["throughput_mqps"] = round_g6(s.throughput / 1e6);
    }
    j["exposed_comm_fraction"] = round_g6(s.exposed_comm_fraction);
    json sb;
    for (const auto& [k, v] : s.serialized_breakdown) {
      sb[k] = round_g6(v * 1e3);
    }
    j["serialized_breakdown_ms"] = sb;
    json cb;
    for (const auto& [k, v] : s.collective_breakdown) {
      cb[k] = round_g6(v * 1e3);
    }
    j["collective_breakdown_ms"] = cb;
    j["normalized_gpu_hours_per_unit_work"] =
        round_g6(s.normalized_gpu_hours_per_unit_work);
    if (scenario.task->total_work > 0) {
      const TrainingDuration d =
          training_duration(s, *scenario.task, *scenario.system);
      j["training"] = json{{"steps", round_g6(d.steps)},
                           {"days", round_g6(d.days)},
                           {"device_hours", round_g6(d.device_hours)}};
    }
    if (report_steps) {
      j["device_hours_for_steps"] =
          json{{"steps", round_g6(*report_steps)},
               {"device_hours",
                round_g6(device_hours_for_steps(s, *scenario.system,
                                                *report_steps))}};
    }
  }
  return j;
}

std::string breakdown_csv(const ReportSummary& s) {
  std::ostringstream os;
  os << "label,time_ms\n";
  for (const auto& [k, v] : s.serialized_breakdown) {
    os << k << "," << format_g6(v * 1e3) << "\n";
  }
  os << "total_serialized," << format_g6(s.serialized_iter_time * 1e3) << "\n";
  os << "total_overlapped," << format_g6(s.overlapped_iter_time * 1e3) << "\n";
  double comm = 0;
  for (const auto& [k, v] : s.collective_breakdown) comm += v;
  os << "total_comm," << format_g6(comm * 1e3) << "\n";
  os << "exposed_comm," << format_g6(s.exposed_comm_fraction * comm * 1e3)
     << "\n";
  return os.str();
}

namespace {

std::string result_row(const PlanResult& r) {
  std::ostringstream os;
  os << r.plan_string << "," << (r.feasible ? "true" : "false") << ","
     << format_g6(r.validation.memory.total / 1e9);
  if (r.summary) {
    os << "," << format_g6(r.summary->overlapped_iter_time * 1e3) << ","
       << format_g6(r.summary->throughput) << ","
       << format_g6(r.summary->exposed_comm_fraction * 100.0);
  } else {
    os << ",,,";
  }
  os << "\n";
  return os.str();
}

std::string results_csv(const std::vector<PlanResult>& results, WorkUnit unit) {
  std::ostringstream os;
  os << "plan,feasible,memory_gb,iter_ms,throughput_"
     << (unit == WorkUnit::Tokens ? "tokens_per_s" : "samples_per_s")
     << ",exposed_pct\n";
  for (const auto& r : results) os << result_row(r);
  return os.str();
}

}  // namespace

std::string sweep_csv(const std::vector<PlanResult>& results, WorkUnit unit) {
  return results_csv(results, unit);
}

std::string pareto_csv(const std::vector<PlanResult>& results, WorkUnit unit) {
  return results_csv(results, unit);
}

}  // namespace madmax
