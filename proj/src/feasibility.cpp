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

#include "rodjoint/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rodjoint/hull.hpp"
#include "rodjoint/intersect.hpp"

namespace rodjoint {

namespace {

constexpr double kBoxInflation = 1e-6;

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

}  // namespace

std::vector<std::pair<EdgeId, EdgeId>> detect_rod_intersections(const EdgeNetwork& net,
                                                                const FabricationParams& params,
                                                                const DerivedData& derived) {
  std::vector<EdgeId> ids;
  std::vector<TriMesh> rods;
  std::vector<Box3> boxes;
  for (EdgeId e = 0; e < net.edges.size(); ++e) {
    const DerivedEdge& d = derived.edges[e];
    if (!d.usable() || !(d.rod_length > 0)) continue;
    ids.push_back(e);
    rods.push_back(rod_solid(net, params, derived, e));
    Box3 b = rods.back().bounds();
    b.min().array() -= kBoxInflation;
    b.max().array() += kBoxInflation;
    boxes.push_back(b);
  }
  std::vector<std::pair<EdgeId, EdgeId>> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const Edge& a = net.edges[ids[i]];
      const Edge& b = net.edges[ids[j]];
      if (a.touches(b.a) || a.touches(b.b)) continue;
      if (!boxes[i].intersects(boxes[j])) continue;
      if (intersect_meshes(rods[i], rods[j])) out.emplace_back(ids[i], ids[j]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double polygon_margin(const std::vector<Vec2>& poly, const Vec2& p) {
  if (poly.size() < 3) return -std::numeric_limits<double>::infinity();
  bool inside = true;
  double inner = std::numeric_limits<double>::infinity();
  double outer = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const Vec2 ab = b - a;
    const double cross = ab.x() * (p.y() - a.y()) - ab.y() * (p.x() - a.x());
    if (cross < 0) inside = false;
    inner = std::min(inner, cross / ab.norm());
    outer = std::min(outer, segment_distance(p, a, b));
  }
  return inside ? inner : -outer;
}

BalanceReport balance_check(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived,
                            const std::vector<JointSolid>& joints) {
  BalanceReport report;
  std::vector<const TriMesh*> parts;
  std::vector<TriMesh> rods;
  double mass = 0.0;
  Vec3 moment = Vec3::Zero();
  for (const JointSolid& j : joints) {
    const MassProperties mp = mass_properties(j.mesh, params.plastic_density);
    mass += mp.mass;
    moment += mp.mass * mp.center_of_mass;
    parts.push_back(&j.mesh);
  }
  for (EdgeId e = 0; e < net.edges.size(); ++e) {
    const DerivedEdge& d = derived.edges[e];
    if (!d.usable() || !(d.rod_length > 0)) continue;
    rods.push_back(rod_solid(net, params, derived, e));
  }
  for (const TriMesh& r : rods) {
    const MassProperties mp = mass_properties(r, params.wood_density);
    mass += mp.mass;
    moment += mp.mass * mp.center_of_mass;
    parts.push_back(&r);
  }
  if (parts.empty() || !(mass > 0)) throw Error(ErrorCode::kNoGroundContact, "design has no parts");
  report.total_mass = mass;
  report.com = moment / mass;
  report.com_ground = report.com.head<2>();

  double zmin = std::numeric_limits<double>::infinity();
  for (const TriMesh* m : parts) {
    for (const Vec3& v : m->vertices) zmin = std::min(zmin, v.z());
  }
  std::vector<Vec2> contacts;
  for (const TriMesh* m : parts) {
    for (const Vec3& v : m->vertices) {
      if (v.z() <= zmin + kContactTolerance) contacts.push_back(v.head<2>());
    }
  }
  report.support_polygon = convex_hull_2d(contacts);
  if (report.support_polygon.size() < 3) {
    throw Error(ErrorCode::kNoGroundContact, "ground contacts are collinear");
  }
  report.margin = polygon_margin(report.support_polygon, report.com_ground);
  report.stable = report.margin >= 0;
  return report;
}

Diagnostics diagnose(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived,
                     const std::vector<JointSolid>& joints, bool all_joints_built) {
  Diagnostics d;
  d.swallowed_edges = derived.swallowed_edges;
  d.degenerate_nodes = derived.degenerate_nodes;
  d.degenerate_edges = derived.degenerate_edges;
  try {
    d.intersecting_edge_pairs = detect_rod_intersections(net, params, derived);
  } catch (const std::exception&) {
    d.intersecting_edge_pairs.clear();
  }
  try {
    d.balance = balance_check(net, params, derived, joints);
  } catch (const std::exception& e) {
    d.balance.known = false;
    d.balance.stable = false;
    d.balance.problem = e.what();
  }
  if (!all_joints_built && d.balance.known) {
    d.balance.known = false;
    d.balance.problem = "some joints could not be built; balance uses the remaining parts";
  }
  return d;
}

Diagnostics diagnose(const EdgeNetwork& net, const FabricationParams& params) {
  Diagnostics empty;
  try {
    const DerivedData derived = derive(net, params);
    std::vector<JointSolid> joints;
    bool all = true;
    for (NodeId n = 0; n < net.nodes.size(); ++n) {
      if (net.incident_edges(n).empty()) continue;
      try {
        joints.push_back(build_joint(net, params, derived, n));
      } catch (const std::exception&) {
        all = false;
      }
    }
    return diagnose(net, params, derived, joints, all);
  } catch (const std::exception& e) {
    empty.balance.known = false;
    empty.balance.problem = e.what();
    return empty;
  }
}

nlohmann::json diagnostics_to_json(const Diagnostics& d) {
  using nlohmann::json;
  json pairs = json::array();
  for (const auto& [a, b] : d.intersecting_edge_pairs) pairs.push_back({a, b});
  json polygon = json::array();
  for (const Vec2& p : d.balance.support_polygon) polygon.push_back({p.x(), p.y()});
  json balance = {
      {"known", d.balance.known},
      {"stable", d.balance.stable},
      {"margin", d.balance.margin},
      {"total_mass", d.balance.total_mass},
      {"com", {d.balance.com.x(), d.balance.com.y(), d.balance.com.z()}},
      {"com_ground", {d.balance.com_ground.x(), d.balance.com_ground.y()}},
      {"support_polygon", polygon},
  };
  if (!d.balance.problem.empty()) balance["problem"] = d.balance.problem;
  return {
      {"feasible", d.feasible()},
      {"intersecting_edge_pairs", pairs},
      {"swallowed_edges", d.swallowed_edges},
      {"degenerate_nodes", d.degenerate_nodes},
      {"degenerate_edges", d.degenerate_edges},
      {"balance", balance},
  };
}

}  // namespace rodjoint
