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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rodjoint/mesh.hpp"
#include "rodjoint/network.hpp"

namespace rodjoint {

/// Min-angle cosines at or above this value mean parallel incident edges;
/// at or below its negation, a straight pass-through node.
inline constexpr double kParallelCos = 1.0 - 1e-6;

/// Largest cosine between edge `e` (seen from `node`) and the node's other
/// incident edges; nullopt at valence 1.
std::optional<double> compute_min_cos(const EdgeNetwork& net, NodeId node, EdgeId e);

/// g = r_eff * sqrt((1 + c) / (1 - c)), i.e. r_eff * cot(theta / 2), with
/// r_eff = r + eps. Zero when c is nullopt. Throws kDegenerateAngle when
/// |c| >= kParallelCos.
double safe_offset(std::optional<double> c, double r_eff);

/// Rigid map taking e_z to the canonical edge direction and the origin to
/// the tip node.
Affine edge_placement(const EdgeFrame& frame, const Vec3& tip_position);

struct DerivedEdge {
  EdgeFrame frame;
  Affine placement;
  std::optional<double> min_cos_tip, min_cos_tail;
  double offset_tip = 0.0;   // g at the tip node
  double offset_tail = 0.0;  // g at the tail node
  double rod_length = 0.0;   // l = |p_tail - p_tip| - g_tip - g_tail
  bool degenerate_length = false;  // endpoints coincide
  bool degenerate_angle = false;   // an end meets a parallel edge
  bool swallowed = false;

  /// Offset at `node`, which must be an endpoint.
  double offset_at(NodeId node) const { return node == frame.tip ? offset_tip : offset_tail; }
  bool usable() const { return !degenerate_length && !degenerate_angle && !swallowed; }
};

/// Per-edge offsets, lengths and placements. Never throws on geometric
/// problems; they are flagged instead.
struct DerivedData {
  std::vector<DerivedEdge> edges;
  std::vector<NodeId> degenerate_nodes;  // ascending
  std::vector<EdgeId> swallowed_edges;   // ascending
  std::vector<EdgeId> degenerate_edges;  // zero length, ascending
};

DerivedData derive(const EdgeNetwork& net, const FabricationParams& params);

/// Edges whose two sockets overlap: g_tip + g_tail + 2h > |p_tail - p_tip|.
std::vector<EdgeId> detect_swallowed(const EdgeNetwork& net, const FabricationParams& params);

struct SocketPiece {
  TriMesh mesh;
  std::vector<std::uint32_t> outlet_vertices;  // the ring nearest the owner
  NodeId owner = 0;
  EdgeId edge = 0;
};

/// Tip and tail sleeves of an edge. `tip_shift` / `tail_shift` move the
/// sleeves axially away from their node (used by the retry policy).
/// Throws kSwallowedEdge or kDegenerateAngle for unusable edges.
std::pair<SocketPiece, SocketPiece> socket_pieces(const EdgeNetwork& net, const FabricationParams& params,
                                                  const DerivedData& derived, EdgeId e, double tip_shift = 0.0,
                                                  double tail_shift = 0.0);

/// Empty space left for the rod: radius r + eps, length l + 2 eps.
TriMesh rod_cavity(const FabricationParams& params, const DerivedData& derived, EdgeId e);

/// The physical rod: radius r, length l, starting g_tip from the tip node.
TriMesh rod_solid(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived, EdgeId e);

struct JointSolid {
  NodeId node = 0;
  TriMesh mesh;
  Mat3 print_rotation = Mat3::Identity();
  int attempts = 1;  // boolean attempts used
};

/// Overlapping parts of a joint before any boolean: the hull of the node
/// and its outlet rings (omitted when flat) followed by the sleeves in
/// incident-edge order. `shift` moves this node's sleeves outward.
std::vector<TriMesh> joint_proxy(const EdgeNetwork& net, const FabricationParams& params,
                                 const DerivedData& derived, NodeId node, double shift = 0.0);

/// Hull of the node and its outlet rings, united with the sleeves, minus
/// the rod cavities. Retries up to three times with axial jitter of
/// 1e-5 * k mm on kBooleanFailure.
JointSolid build_joint(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived,
                       NodeId node);

/// Joints of every node with at least one edge, in node order. Work is
/// spread over `threads` workers (0 = hardware concurrency); the result
/// does not depend on scheduling. The first failure in node order is
/// rethrown.
std::vector<JointSolid> build_all_joints(const EdgeNetwork& net, const FabricationParams& params,
                                         const DerivedData& derived, unsigned threads = 0);

/// "edge,tip,tail,length_mm" rows, lengths with four decimals.
std::string rods_csv(const EdgeNetwork& net, const DerivedData& derived);

/// joint_NN.stl for each joint plus rods.csv.
void write_build_outputs(const std::filesystem::path& dir, const std::vector<JointSolid>& joints,
                         const EdgeNetwork& net, const DerivedData& derived);

}  // namespace rodjoint
