// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0

#include "madmax/cost.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace madmax {

namespace {

struct LevelLeg {
  std::int64_t participants = 1;
  double bandwidth = 1;
  // Parallel lanes feeding this level: for the inter-node leg of a global
  // collective the node's devices split the aggregated buffer.
  double inner = 1;
  SpanLevel level = SpanLevel::Intra;
};

std::vector<LevelLeg> span_legs(const SystemSpec& sys, SpanLevel span) {
  switch (span) {
    case SpanLevel::Intra:
      return {{sys.devices_per_node, sys.intra_node_bw, 1.0, SpanLevel::Intra}};
    case SpanLevel::Inter:
      return {{sys.num_nodes, sys.inter_node_bw, 1.0, SpanLevel::Inter}};
    case SpanLevel::Global:
      return {{sys.devices_per_node, sys.intra_node_bw, 1.0, SpanLevel::Intra},
              {sys.num_nodes, sys.inter_node_bw,
               static_cast<double>(sys.devices_per_node), SpanLevel::Inter}};
  }
  return {};
}

void check_bytes(double bytes) {
  if (bytes < 0) throw std::invalid_argument("bytes must be >= 0");
}

}  // namespace

double compute_time(double flops, const DeviceSpec& device) {
  if (flops < 0) throw std::invalid_argument("flops must be >= 0");
  return flops / (device.peak_flops * device.compute_utilization);
}

double lookup_time(double bytes, const DeviceSpec& device) {
  check_bytes(bytes);
  return bytes / (device.hbm_bandwidth * device.hbm_utilization);
}

double all2all_time(double send_bytes_per_device, const SystemSpec& system,
                    SpanLevel span) {
  check_bytes(send_bytes_per_device);
  if (send_bytes_per_device == 0) return 0;
  // Point-to-point sends cross every level of the span; the slowest
  // effective link bounds the whole exchange.
  double effective = std::numeric_limits<double>::infinity();
  std::int64_t span_participants = 1;
  for (const auto& leg : span_legs(system, span)) {
    span_participants *= leg.participants;
    if (leg.participants <= 1) continue;
    const double eff = system.efficiency(CollectiveKind::All2All, leg.level,
                                         send_bytes_per_device);
    effective = std::min(effective, leg.bandwidth * eff);
  }
  if (span_participants <= 1) return 0;
  return send_bytes_per_device / effective;
}

double allreduce_time(double buffer_bytes, const SystemSpec& system,
                      SpanLevel span) {
  check_bytes(buffer_bytes);
  double t = 0;
  for (const auto& leg : span_legs(system, span)) {
    if (leg.participants <= 1) continue;
    const double n = static_cast<double>(leg.participants);
    const double level_bytes = buffer_bytes / leg.inner;
    const double eff =
        system.efficiency(CollectiveKind::AllReduce, leg.level, level_bytes);
    t += 2.0 * (n - 1.0) / n * level_bytes / (leg.bandwidth * eff);
  }
  return t;
}

namespace {

double gather_like_time(CollectiveKind kind, double shard_bytes,
                        const SystemSpec& system, SpanLevel span) {
  check_bytes(shard_bytes);
  double total_participants = 1;
  for (const auto& leg : span_legs(system, span)) {
    total_participants *= static_cast<double>(leg.participants);
  }
  const double full_bytes = shard_bytes * total_participants;
  double t = 0;
  for (const auto& leg : span_legs(system, span)) {
    if (leg.participants <= 1) continue;
    const double n = static_cast<double>(leg.participants);
    const double level_bytes = full_bytes / leg.inner;
    const double eff = system.efficiency(kind, leg.level, level_bytes);
    t += (n - 1.0) / n * level_bytes / (leg.bandwidth * eff);
  }
  return t;
}

}  // namespace

double allgather_time(double shard_bytes, const SystemSpec& system,
                      SpanLevel span) {
  return gather_like_time(CollectiveKind::AllGather, shard_bytes, system, span);
}

double reducescatter_time(double shard_bytes, const SystemSpec& system,
                          SpanLevel span) {
  return gather_like_time(CollectiveKind::ReduceScatter, shard_bytes, system,
                          span);
}

double collective_time(const CollectiveReq& req, const SystemSpec& system) {
  switch (req.kind) {
    case CollectiveKind::All2All:
      return all2all_time(req.bytes_per_device, system, req.level);
    case CollectiveKind::AllReduce:
      return allreduce_time(req.bytes_per_device, system, req.level);
    case CollectiveKind::AllGather:
      return allgather_time(req.bytes_per_device, system, req.level);
    case CollectiveKind::ReduceScatter:
      return reducescatter_time(req.bytes_per_device, system, req.level);
  }
  return 0;
}

std::vector<EfficiencyEntry> load_efficiency_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open efficiency csv: " + path);
  std::vector<EfficiencyEntry> entries;
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (header) {  // expect: collective,level,min_bytes,efficiency
      header = false;
      if (line.find("collective") != std::string::npos) continue;
    }
    std::istringstream fields(line);
    std::string collective, level, min_bytes, efficiency;
    if (!std::getline(fields, collective, ',') ||
        !std::getline(fields, level, ',') ||
        !std::getline(fields, min_bytes, ',') ||
        !std::getline(fields, efficiency, ',')) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected collective,level,min_bytes,efficiency");
    }
    EfficiencyEntry e;
    if (collective == "all2all" || collective == "All2All") {
      e.collective = CollectiveKind::All2All;
    } else if (collective == "allreduce" || collective == "AllReduce") {
      e.collective = CollectiveKind::AllReduce;
    } else if (collective == "allgather" || collective == "AllGather") {
      e.collective = CollectiveKind::AllGather;
    } else if (collective == "reducescatter" || collective == "ReduceScatter") {
      e.collective = CollectiveKind::ReduceScatter;
    } else {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown collective '" + collective + "'");
    }
    if (level == "intra") {
      e.level = SpanLevel::Intra;
    } else if (level == "inter") {
      e.level = SpanLevel::Inter;
    } else {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown level '" + level + "'");
    }
    e.min_bytes = std::stod(min_bytes);
    e.efficiency = std::stod(efficiency);
    if (e.efficiency <= 0 || e.efficiency > 1) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": efficiency must be in (0,1]");
    }
    entries.push_back(e);
  }
  return entries;
}

}  // namespace madmax
