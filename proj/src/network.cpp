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

#include "rodjoint/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

namespace rodjoint {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kStaleReference: return "StaleReference";
    case ErrorCode::kDegenerateEdge: return "DegenerateEdge";
    case ErrorCode::kInvalidSides: return "InvalidSides";
    case ErrorCode::kDegenerateHull: return "DegenerateHull";
    case ErrorCode::kBooleanFailure: return "BooleanFailure";
    case ErrorCode::kNotSolid: return "NotSolid";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedStl: return "MalformedStl";
    case ErrorCode::kSwallowedEdge: return "SwallowedEdge";
    case ErrorCode::kDegenerateAngle: return "DegenerateAngle";
    case ErrorCode::kNoGroundContact: return "NoGroundContact";
    case ErrorCode::kEngraveFailure: return "EngraveFailure";
    case ErrorCode::kOversizeRod: return "OversizeRod";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kStaleRevision: return "StaleRevision";
    case ErrorCode::kInvalidDocument: return "InvalidDocument";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::vector<EdgeId> EdgeNetwork::incident_edges(NodeId node) const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < edges.size(); ++e) {
    if (edges[e].touches(node)) out.push_back(e);
  }
  return out;
}

std::optional<EdgeId> EdgeNetwork::find_edge(NodeId a, NodeId b) const {
  const Edge key{a, b};
  for (EdgeId e = 0; e < edges.size(); ++e) {
    if (edges[e].same_as(key)) return e;
  }
  return std::nullopt;
}

double EdgeNetwork::edge_length(EdgeId e) const {
  return (nodes.at(edges.at(e).b) - nodes.at(edges.at(e).a)).norm();
}

void FabricationParams::check() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(rod_radius) || rod_radius <= 0) fail("rod radius must be > 0");
  if (!profile.circular() && profile.value < 3) fail("profile sides must be >= 3 or circular");
  if (!finite(thickness) || thickness <= 0) fail("joint thickness must be > 0");
  if (!finite(socket_length) || socket_length <= 0) fail("socket length must be > 0");
  if (!finite(tolerance)) fail("tolerance must be finite");
  if (!finite(stock_length) || stock_length <= 0) fail("stock length must be > 0");
  if (!finite(stock_padding) || stock_padding < 0) fail("stock padding must be >= 0");
  if (!finite(wood_density) || wood_density <= 0) fail("wood density must be > 0");
  if (!finite(plastic_density) || plastic_density <= 0) fail("plastic density must be > 0");
  if (rod_radius + tolerance <= 0) fail("r + eps must be > 0");
  if (socket_length + thickness <= 0) fail("h + sigma must be > 0");
  if (stock_length - 2 * stock_padding <= 0) fail("b - 2 pad must be > 0");
}

ValidationReport validate_network(const EdgeNetwork& net) {
  ValidationReport report;
  for (NodeId n = 0; n < net.nodes.size(); ++n) {
    if (!net.nodes[n].allFinite()) {
      report.errors.push_back({"NonFiniteNode", n, "node " + std::to_string(n) + " has a non-finite coordinate"});
    }
  }
  std::map<std::pair<NodeId, NodeId>, EdgeId> seen;
  for (EdgeId e = 0; e < net.edges.size(); ++e) {
    const Edge& edge = net.edges[e];
    if (edge.a >= net.nodes.size() || edge.b >= net.nodes.size()) {
      report.errors.push_back({"IndexOutOfRange", e, "edge " + std::to_string(e) + " references a missing node"});
      continue;
    }
    if (edge.a == edge.b) {
      report.errors.push_back({"SelfLoop", e, "edge " + std::to_string(e) + " connects node " +
                                                  std::to_string(edge.a) + " to itself"});
      continue;
    }
    auto [it, inserted] = seen.emplace(std::make_pair(edge.lo(), edge.hi()), e);
    if (!inserted) {
      report.errors.push_back({"DuplicateEdge", e, "edge " + std::to_string(e) + " duplicates edge " +
                                                       std::to_string(it->second)});
      continue;
    }
    if (net.nodes[edge.a].allFinite() && net.nodes[edge.b].allFinite() &&
        (net.nodes[edge.b] - net.nodes[edge.a]).norm() < kDegenerateEdgeLength) {
      report.warnings.push_back({"DegenerateEdge", e, "edge " + std::to_string(e) + " has coincident endpoints"});
    }
  }
  std::vector<int> valence(net.nodes.size(), 0);
  for (const Edge& edge : net.edges) {
    if (edge.a < valence.size() && edge.b < valence.size()) {
      ++valence[edge.a];
      ++valence[edge.b];
    }
  }
  for (NodeId n = 0; n < valence.size(); ++n) {
    if (valence[n] == 0) {
      report.warnings.push_back({"IsolatedNode", n, "node " + std::to_string(n) + " has no incident edge"});
    }
  }
  return report;
}

namespace {

void require_nodes(const EdgeNetwork& net, const Selection& sel) {
  for (NodeId n : sel.nodes) {
    if (n >= net.nodes.size()) {
      throw Error(ErrorCode::kStaleReference, "node " + std::to_string(n) + " does not exist");
    }
  }
}

template <typename F>
void map_selection(EdgeNetwork& net, const Selection& sel, F&& f) {
  require_nodes(net, sel);
  std::set<NodeId> unique(sel.nodes.begin(), sel.nodes.end());
  for (NodeId n : unique) net.nodes[n] = f(net.nodes[n]);
}

double require_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be > 0");
  }
  return v;
}

}  // namespace

EditResult apply_edit(const Document& doc, const EditCommand& cmd) {
  EditResult result{doc, {}};
  EdgeNetwork& net = result.document.network;
  FabricationParams& params = result.document.params;

  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TranslateSelection>) {
          map_selection(net, c.selection, [&](const Vec3& p) { return Vec3(p + c.delta); });
        } else if constexpr (std::is_same_v<T, RotateSelection>) {
          if (c.axis.norm() == 0) throw Error(ErrorCode::kInvalidArgument, "rotation axis is zero");
          const Mat3 rot = Eigen::AngleAxisd(c.angle, c.axis.normalized()).toRotationMatrix();
          map_selection(net, c.selection, [&](const Vec3& p) { return Vec3(c.pivot + rot * (p - c.pivot)); });
        } else if constexpr (std::is_same_v<T, ScaleSelection>) {
          require_positive(c.factor, "scale factor");
          map_selection(net, c.selection, [&](const Vec3& p) { return Vec3(c.pivot + c.factor * (p - c.pivot)); });
        } else if constexpr (std::is_same_v<T, ConnectSelected>) {
          require_nodes(net, c.selection);
          std::vector<NodeId> sel(c.selection.nodes);
          std::sort(sel.begin(), sel.end());
          sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
          for (std::size_t i = 0; i < sel.size(); ++i) {
            for (std::size_t j = i + 1; j < sel.size(); ++j) {
              if (net.find_edge(sel[i], sel[j])) {
                result.warnings.push_back("edge {" + std::to_string(sel[i]) + "," + std::to_string(sel[j]) +
                                          "} already exists");
                continue;
              }
              net.edges.push_back({sel[i], sel[j]});
            }
          }
        } else if constexpr (std::is_same_v<T, SplitEdge>) {
          const auto id = net.find_edge(c.edge.a, c.edge.b);
          if (!id || c.edge.a >= net.nodes.size() || c.edge.b >= net.nodes.size()) {
            throw Error(ErrorCode::kStaleReference, "edge {" + std::to_string(c.edge.a) + "," +
                                                        std::to_string(c.edge.b) + "} does not exist");
          }
          const Edge old = net.edges[*id];
          const NodeId k = net.nodes.size();
          net.nodes.push_back(0.5 * (net.nodes[old.a] + net.nodes[old.b]));
          net.edges.erase(net.edges.begin() + static_cast<std::ptrdiff_t>(*id));
          net.edges.push_back({old.a, k});
          net.edges.push_back({k, old.b});
        } else if constexpr (std::is_same_v<T, SetRadius>) {
          params.rod_radius = require_positive(c.value, "rod radius");
        } else if constexpr (std::is_same_v<T, SetThickness>) {
          params.thickness = require_positive(c.value, "thickness");
        } else if constexpr (std::is_same_v<T, SetSocketLength>) {
          params.socket_length = require_positive(c.value, "socket length");
        } else if constexpr (std::is_same_v<T, SetProfileSides>) {
          if (!c.value.circular() && c.value.value < 3) {
            throw Error(ErrorCode::kInvalidSides, "profile needs at least 3 sides");
          }
          params.profile = c.value;
        }
      },
      cmd);
  return result;
}

EdgeFrame canonical_edge_frame(const EdgeNetwork& net, const Edge& edge) {
  if (edge.a >= net.nodes.size() || edge.b >= net.nodes.size()) {
    throw Error(ErrorCode::kStaleReference, "edge references a missing node");
  }
  EdgeFrame frame;
  frame.tip = edge.lo();
  frame.tail = edge.hi();
  const Vec3 d = net.nodes[frame.tail] - net.nodes[frame.tip];
  frame.length = d.norm();
  if (!(frame.length >= kDegenerateEdgeLength)) {
    throw Error(ErrorCode::kDegenerateEdge, "edge {" + std::to_string(frame.tip) + "," +
                                                std::to_string(frame.tail) + "} has coincident endpoints");
  }
  frame.direction = d / frame.length;
  return frame;
}

std::string node_label(NodeId node) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02zu", node);
  return buf;
}

}  // namespace rodjoint
