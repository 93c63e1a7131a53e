// Copyright 2026 The madmax Authors.
// SPDX-License-Identifier: Apache-2.0
//
// First-order time estimates: roofline compute/lookup times and
// bandwidth-only ring models for the communication collectives over the
// hierarchical interconnect.

#pragma once

#include <string>
#include <vector>

#include "madmax/plan.hpp"
#include "madmax/workload.hpp"

namespace madmax {

double compute_time(double flops, const DeviceSpec& device);
double lookup_time(double bytes, const DeviceSpec& device);

// All2All is bound by the slowest interconnect level the collective
// traverses; time = send_bytes / (effective bw).
double all2all_time(double send_bytes_per_device, const SystemSpec& system,
                    SpanLevel span);

// Ring AllReduce. Per traversed level: 2(n-1)/n * level_bytes / bw, composed
// serially for global spans. For the global case the inter-node phase
// operates on the node-aggregated buffer, i.e. level bytes shrink by the
// number of devices per node.
double allreduce_time(double buffer_bytes, const SystemSpec& system,
                      SpanLevel span);

// Ring AllGather / ReduceScatter of a sharded buffer: (n-1)/n * full / bw
// per level, with the same hierarchical byte division as allreduce_time.
double allgather_time(double shard_bytes, const SystemSpec& system,
                      SpanLevel span);
double reducescatter_time(double shard_bytes, const SystemSpec& system,
                          SpanLevel span);

double collective_time(const CollectiveReq& req, const SystemSpec& system);

// CSV with columns: collective,level,min_bytes,efficiency
std::vector<EfficiencyEntry> load_efficiency_csv(const std::string& path);

}  // namespace madmax
