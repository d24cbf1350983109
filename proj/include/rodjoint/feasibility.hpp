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
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rodjoint/joint.hpp"

namespace rodjoint {

/// Part vertices this close to the lowest point touch the ground (mm).
inline constexpr double kContactTolerance = 1.0;

struct BalanceReport {
  bool known = true;       // false when some joint could not be built
  std::string problem;     // why the report is unknown or has no contact
  double total_mass = 0.0;  // kg
  Vec3 com = Vec3::Zero();
  Vec2 com_ground = Vec2::Zero();
  std::vector<Vec2> support_polygon;  // counter-clockwise
  bool stable = false;
  double margin = 0.0;  // signed distance to the polygon boundary, > 0 inside
};

struct Diagnostics {
  std::vector<std::pair<EdgeId, EdgeId>> intersecting_edge_pairs;  // (lo, hi), sorted
  std::vector<EdgeId> swallowed_edges;
  std::vector<NodeId> degenerate_nodes;
  std::vector<EdgeId> degenerate_edges;
  BalanceReport balance;

  bool feasible() const {
    return intersecting_edge_pairs.empty() && swallowed_edges.empty() && degenerate_nodes.empty() &&
           degenerate_edges.empty() && balance.known && balance.stable;
  }
};

/// Pairs of node-disjoint edges whose rod solids intersect.
std::vector<std::pair<EdgeId, EdgeId>> detect_rod_intersections(const EdgeNetwork& net,
                                                                const FabricationParams& params,
                                                                const DerivedData& derived);

/// Signed distance from p to the boundary of a convex CCW polygon,
/// positive inside.
double polygon_margin(const std::vector<Vec2>& polygon, const Vec2& p);

/// Mass and support analysis over joints (plastic) and rods (wood).
/// Throws kNoGroundContact when the contacts span no area.
BalanceReport balance_check(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived,
                            const std::vector<JointSolid>& joints);

/// Builds the joints itself; never throws.
Diagnostics diagnose(const EdgeNetwork& net, const FabricationParams& params);
/// Same with joints already built (as many as could be).
Diagnostics diagnose(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived,
                     const std::vector<JointSolid>& joints, bool all_joints_built);

nlohmann::json diagnostics_to_json(const Diagnostics& d);

}  // namespace rodjoint
