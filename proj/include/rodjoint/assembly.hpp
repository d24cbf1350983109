// Copyright 2026 The Rodjoint Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rodjoint/joint.hpp"
#include "rodjoint/network.hpp"

namespace rodjoint {

enum class StepKind { kPlaceJoint, kPlaceRod };

struct AssemblyStep {
  StepKind kind = StepKind::kPlaceJoint;
  std::size_t part = 0;  // node id for joints, edge id for rods

  friend bool operator==(const AssemblyStep&, const AssemblyStep&) = default;
};

struct AssemblyPlan {
  std::vector<AssemblyStep> steps;
  std::vector<std::size_t> component_starts;  // step index where each component begins
};

/// Depth-first order: at each node place the joint, then every unplaced
/// incident rod (ascending neighbor index), then recurse into unvisited
/// neighbors ascending. The default start is the lowest-index node among
/// those of lowest z. Disconnected networks yield one sub-plan per
/// component, largest first; isolated nodes are skipped since they carry no
/// joint.
AssemblyPlan assembly_order(const EdgeNetwork& net, std::optional<NodeId> start = std::nullopt);

struct StepView {
  AssemblyStep focus;
  std::string label;          // two-digit id for joints, length for rods
  double rod_length = 0.0;    // rods only
  TriMesh focus_mesh;         // boolean-free proxy of the focus part
  std::vector<AssemblyStep> context;  // already placed, drawn recessed
  std::vector<NodeId> future_nodes;   // drawn as dots
  std::vector<EdgeId> future_edges;   // drawn as segments
  Vec3 camera_target = Vec3::Zero();  // focus centroid
  double framing_radius = 0.0;        // furthest reference point of an adjacent part
};

/// Throws kIndexOutOfRange when index >= steps.size().
StepView step_view(const AssemblyPlan& plan, std::size_t index, const EdgeNetwork& net,
                   const FabricationParams& params);

/// Printable checklist: one line per step with the joint id or rod length.
std::string assembly_text(const AssemblyPlan& plan, const DerivedData& derived);

nlohmann::json assembly_to_json(const AssemblyPlan& plan, const DerivedData& derived);

}  // namespace rodjoint
