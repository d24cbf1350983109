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

#include "rodjoint/joint.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <thread>

#include "rodjoint/boolean.hpp"
#include "rodjoint/fabrication.hpp"
#include "rodjoint/hull.hpp"
#include "rodjoint/stl.hpp"

namespace rodjoint {

namespace {

// Unit vector from `node` along edge e, or nullopt for zero-length edges.
std::optional<Vec3> outgoing(const EdgeNetwork& net, NodeId node, EdgeId e) {
  const Vec3 d = net.nodes[net.edges[e].other(node)] - net.nodes[node];
  const double len = d.norm();
  if (!(len >= kDegenerateEdgeLength)) return std::nullopt;
  return d / len;
}

bool degenerate_cos(double c) { return c >= kParallelCos || c <= -kParallelCos; }

const DerivedEdge& usable_edge(const DerivedData& derived, EdgeId e) {
  const DerivedEdge& d = derived.edges.at(e);
  if (d.degenerate_length) throw Error(ErrorCode::kDegenerateEdge, "edge " + std::to_string(e) + " has zero length");
  if (d.degenerate_angle) {
    throw Error(ErrorCode::kDegenerateAngle, "edge " + std::to_string(e) + " is parallel to a neighboring edge");
  }
  if (d.swallowed) {
    throw Error(ErrorCode::kSwallowedEdge, "edge " + std::to_string(e) + " {" + std::to_string(d.frame.tip) + "," +
                                               std::to_string(d.frame.tail) + "}: sockets overlap");
  }
  return d;
}

TriMesh placed_prism(const FabricationParams& params, const Affine& placement, double radius, double length,
                     double offset) {
  const Affine local{Vec3(radius, radius, length).asDiagonal().toDenseMatrix(), Vec3(0, 0, offset)};
  return transform(unit_prism(params.profile.sides()), placement * local);
}

}  // namespace

std::optional<double> compute_min_cos(const EdgeNetwork& net, NodeId node, EdgeId e) {
  const auto w = outgoing(net, node, e);
  if (!w) return std::nullopt;
  std::optional<double> best;
  for (EdgeId k : net.incident_edges(node)) {
    if (k == e) continue;
    const auto wk = outgoing(net, node, k);
    if (!wk) continue;
    const double c = w->dot(*wk);
    if (!best || c > *best) best = c;
  }
  return best;
}

double safe_offset(std::optional<double> c, double r_eff) {
  if (!c) return 0.0;
  if (degenerate_cos(*c)) {
    throw Error(ErrorCode::kDegenerateAngle, "incident edges are (anti)parallel, cos = " + std::to_string(*c));
  }
  return r_eff * std::sqrt((1.0 + *c) / (1.0 - *c));
}

Affine edge_placement(const EdgeFrame& frame, const Vec3& tip_position) {
  return Affine::translate(tip_position) * Affine{rotation_to(frame.direction), Vec3::Zero()};
}

DerivedData derive(const EdgeNetwork& net, const FabricationParams& params) {
  DerivedData out;
  out.edges.resize(net.edges.size());
  const double r_eff = params.rod_radius + params.tolerance;
  std::vector<char> degenerate_node(net.nodes.size(), 0);
  for (EdgeId e = 0; e < net.edges.size(); ++e) {
    DerivedEdge& d = out.edges[e];
    const Edge& edge = net.edges[e];
    d.frame.tip = edge.lo();
    d.frame.tail = edge.hi();
    try {
      d.frame = canonical_edge_frame(net, edge);
    } catch (const Error&) {
      d.degenerate_length = true;
      out.degenerate_edges.push_back(e);
      continue;
    }
    d.placement = edge_placement(d.frame, net.nodes[d.frame.tip]);
    d.min_cos_tip = compute_min_cos(net, d.frame.tip, e);
    d.min_cos_tail = compute_min_cos(net, d.frame.tail, e);
    if (d.min_cos_tip && degenerate_cos(*d.min_cos_tip)) {
      d.degenerate_angle = true;
      degenerate_node[d.frame.tip] = 1;
    }
    if (d.min_cos_tail && degenerate_cos(*d.min_cos_tail)) {
      d.degenerate_angle = true;
      degenerate_node[d.frame.tail] = 1;
    }
    if (d.degenerate_angle) continue;
    d.offset_tip = safe_offset(d.min_cos_tip, r_eff);
    d.offset_tail = safe_offset(d.min_cos_tail, r_eff);
    d.rod_length = d.frame.length - d.offset_tip - d.offset_tail;
    d.swallowed = d.offset_tip + d.offset_tail + 2.0 * params.socket_length > d.frame.length;
    if (d.swallowed) out.swallowed_edges.push_back(e);
  }
  for (NodeId n = 0; n < degenerate_node.size(); ++n) {
    if (degenerate_node[n]) out.degenerate_nodes.push_back(n);
  }
  return out;
}

std::vector<EdgeId> detect_swallowed(const EdgeNetwork& net, const FabricationParams& params) {
  return derive(net, params).swallowed_edges;
}

std::pair<SocketPiece, SocketPiece> socket_pieces(const EdgeNetwork& net, const FabricationParams& params,
                                                  const DerivedData& derived, EdgeId e, double tip_shift,
                                                  double tail_shift) {
  (void)net;
  const DerivedEdge& d = usable_edge(derived, e);
  const double radius = params.rod_radius + params.thickness;
  const double length = params.socket_length + params.thickness;
  const int p = params.profile.sides();
  SocketPiece tip{placed_prism(params, d.placement, radius, length, d.offset_tip - params.thickness + tip_shift),
                  prism_base_ring(p), d.frame.tip, e};
  SocketPiece tail{placed_prism(params, d.placement, radius, length,
                                d.frame.length - params.socket_length - d.offset_tail - tail_shift),
                   prism_top_ring(p), d.frame.tail, e};
  return {std::move(tip), std::move(tail)};
}

TriMesh rod_cavity(const FabricationParams& params, const DerivedData& derived, EdgeId e) {
  const DerivedEdge& d = usable_edge(derived, e);
  const double radius = params.rod_radius + params.tolerance;
  const double length = d.rod_length + 2.0 * params.tolerance;
  if (!(radius > 0) || !(length > 0)) {
    throw Error(ErrorCode::kSwallowedEdge, "edge " + std::to_string(e) + ": cavity has no extent");
  }
  return placed_prism(params, d.placement, radius, length, d.offset_tip - params.tolerance);
}

TriMesh rod_solid(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived, EdgeId e) {
  (void)net;
  const DerivedEdge& d = usable_edge(derived, e);
  if (!(d.rod_length > 0)) throw Error(ErrorCode::kSwallowedEdge, "edge " + std::to_string(e) + ": no rod left");
  return placed_prism(params, d.placement, params.rod_radius, d.rod_length, d.offset_tip);
}

std::vector<TriMesh> joint_proxy(const EdgeNetwork& net, const FabricationParams& params,
                                 const DerivedData& derived, NodeId node, double shift) {
  std::vector<TriMesh> added;
  std::vector<Vec3> hull_points{net.nodes[node]};
  for (EdgeId e : net.incident_edges(node)) {
    const bool is_tip = derived.edges[e].frame.tip == node;
    auto pieces = socket_pieces(net, params, derived, e, is_tip ? shift : 0.0, is_tip ? 0.0 : shift);
    SocketPiece& piece = is_tip ? pieces.first : pieces.second;
    for (std::uint32_t v : piece.outlet_vertices) hull_points.push_back(piece.mesh.vertices[v]);
    added.push_back(std::move(piece.mesh));
  }
  try {
    added.insert(added.begin(), convex_hull(hull_points));
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kDegenerateHull) throw;
  }
  return added;
}

JointSolid build_joint(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived,
                       NodeId node) {
  const std::vector<EdgeId> incident = net.incident_edges(node);
  if (incident.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "node " + std::to_string(node) + " has no incident edge");
  }
  std::vector<TriMesh> cavities;
  for (EdgeId e : incident) cavities.push_back(rod_cavity(params, derived, e));

  constexpr int kRetries = 3;
  for (int attempt = 0;; ++attempt) {
    const std::vector<TriMesh> added = joint_proxy(net, params, derived, node, 1e-5 * attempt);
    try {
      JointSolid joint;
      joint.node = node;
      joint.mesh = union_minus(added, cavities);
      joint.print_rotation = print_orientation(net, node).rotation;
      joint.attempts = attempt + 1;
      if (!is_solid(joint.mesh)) throw Error(ErrorCode::kBooleanFailure, "empty joint");
      return joint;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kBooleanFailure || attempt == kRetries) {
        const std::string what = err.what();
        const std::size_t prefix = error_code_name(err.code()).size() + 2;
        throw Error(err.code(), "joint " + node_label(node) + ": " + what.substr(std::min(prefix, what.size())));
      }
    }
  }
}

std::vector<JointSolid> build_all_joints(const EdgeNetwork& net, const FabricationParams& params,
                                         const DerivedData& derived, unsigned threads) {
  std::vector<NodeId> nodes;
  for (NodeId n = 0; n < net.nodes.size(); ++n) {
    if (!net.incident_edges(n).empty()) nodes.push_back(n);
  }
  std::vector<std::optional<JointSolid>> results(nodes.size());
  std::vector<std::exception_ptr> errors(nodes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < nodes.size(); i = next++) {
      try {
        results[i] = build_joint(net, params, derived, nodes[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(nodes.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<JointSolid> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

std::string rods_csv(const EdgeNetwork& net, const DerivedData& derived) {
  std::string out = "edge,tip,tail,length_mm\n";
  char line[128];
  for (EdgeId e = 0; e < net.edges.size(); ++e) {
    const DerivedEdge& d = derived.edges[e];
    std::snprintf(line, sizeof line, "%zu,%zu,%zu,%.4f\n", e, d.frame.tip, d.frame.tail, d.rod_length);
    out += line;
  }
  return out;
}

void write_build_outputs(const std::filesystem::path& dir, const std::vector<JointSolid>& joints,
                         const EdgeNetwork& net, const DerivedData& derived) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  for (const JointSolid& j : joints) {
    export_stl(print_ready(j), dir / ("joint_" + node_label(j.node) + ".stl"));
  }
  std::ofstream csv(dir / "rods.csv", std::ios::binary);
  if (!csv) throw Error(ErrorCode::kIoError, "cannot write " + (dir / "rods.csv").string());
  csv << rods_csv(net, derived);
}

}  // namespace rodjoint
