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

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rodjoint/types.hpp"

namespace rodjoint {

using NodeId = std::size_t;
using EdgeId = std::size_t;

/// An undirected edge. Stored in the order the user gave it; use
/// `canonical()` when an orientation-independent key is needed.
struct Edge {
  NodeId a = 0;
  NodeId b = 0;

  NodeId lo() const { return a < b ? a : b; }
  NodeId hi() const { return a < b ? b : a; }
  Edge canonical() const { return {lo(), hi()}; }
  bool touches(NodeId n) const { return a == n || b == n; }
  NodeId other(NodeId n) const { return n == a ? b : a; }
  bool same_as(const Edge& o) const { return lo() == o.lo() && hi() == o.hi(); }

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// The design skeleton: node positions in millimetres plus undirected edges.
struct EdgeNetwork {
  std::vector<Vec3> nodes;
  std::vector<Edge> edges;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }

  /// Edge ids incident to `node`, in ascending edge-id order.
  std::vector<EdgeId> incident_edges(NodeId node) const;
  std::optional<EdgeId> find_edge(NodeId a, NodeId b) const;
  double edge_length(EdgeId e) const;

  friend bool operator==(const EdgeNetwork&, const EdgeNetwork&) = default;
};

/// Number of sides of the rod profile; `kCircular` is discretized to a
/// 32-gon wherever geometry is generated.
struct ProfileSides {
  static constexpr int kCircular = 0;
  static constexpr int kCircularSides = 32;

  int value = kCircular;

  bool circular() const { return value == kCircular; }
  int sides() const { return circular() ? kCircularSides : value; }

  friend bool operator==(const ProfileSides&, const ProfileSides&) = default;
};

struct FabricationParams {
  double rod_radius = 3.175;  // r, mm
  ProfileSides profile;       // p
  double thickness = 2.0;     // sigma, mm
  double socket_length = 15.0;  // h, mm
  double tolerance = 0.1;       // epsilon, mm; negative for friction fit
  double stock_length = 1000.0;  // b, mm
  double stock_padding = 10.0;   // pad, mm
  double wood_density = 700.0;   // kg/m^3
  double plastic_density = 1040.0;  // kg/m^3

  /// Throws kInvalidArgument when a field or a derived constraint is out of
  /// range.
  void check() const;

  friend bool operator==(const FabricationParams&, const FabricationParams&) = default;
};

struct ValidationIssue {
  std::string code;
  std::size_t subject = 0;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }
};

ValidationReport validate_network(const EdgeNetwork& net);

// ---------------------------------------------------------------------------
// Editing

struct Selection {
  std::vector<NodeId> nodes;
};

struct TranslateSelection {
  Selection selection;
  Vec3 delta = Vec3::Zero();
};

struct RotateSelection {
  Selection selection;
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;  // radians
  Vec3 pivot = Vec3::Zero();
};

struct ScaleSelection {
  Selection selection;
  double factor = 1.0;
  Vec3 pivot = Vec3::Zero();
};

struct ConnectSelected {
  Selection selection;
};

struct SplitEdge {
  Edge edge;
};

struct SetRadius { double value; };
struct SetThickness { double value; };
struct SetSocketLength { double value; };
struct SetProfileSides { ProfileSides value; };

using EditCommand =
    std::variant<TranslateSelection, RotateSelection, ScaleSelection, ConnectSelected,
                 SplitEdge, SetRadius, SetThickness, SetSocketLength, SetProfileSides>;

struct Document {
  EdgeNetwork network;
  FabricationParams params;

  friend bool operator==(const Document&, const Document&) = default;
};

struct EditResult {
  Document document;
  std::vector<std::string> warnings;
};

/// Applies one editing command and returns the new document. Elements the
/// command does not name are left untouched; SplitEdge appends its node so
/// existing node ids (and engraved IDs) stay stable.
EditResult apply_edit(const Document& doc, const EditCommand& cmd);

/// Orientation-independent frame of an edge: tip is the lower node index.
struct EdgeFrame {
  NodeId tip = 0;
  NodeId tail = 0;
  Vec3 direction = Vec3::UnitZ();
  double length = 0.0;
};

inline constexpr double kDegenerateEdgeLength = 1e-9;

EdgeFrame canonical_edge_frame(const EdgeNetwork& net, const Edge& edge);

/// Zero-padded two digit identifier shared by engravings and the assembler.
std::string node_label(NodeId node);

}  // namespace rodjoint
