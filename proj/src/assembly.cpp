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

#include "rodjoint/assembly.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

namespace rodjoint {

namespace {

// Neighbors of every node as (neighbor, edge) pairs sorted by neighbor,
// then edge id.
std::vector<std::vector<std::pair<NodeId, EdgeId>>> adjacency(const EdgeNetwork& net) {
  std::vector<std::vector<std::pair<NodeId, EdgeId>>> adj(net.nodes.size());
  for (EdgeId e = 0; e < net.edges.size(); ++e) {
    const Edge& edge = net.edges[e];
    adj[edge.a].emplace_back(edge.b, e);
    if (edge.b != edge.a) adj[edge.b].emplace_back(edge.a, e);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

NodeId lowest_node(const EdgeNetwork& net, const std::vector<NodeId>& candidates) {
  NodeId best = candidates.front();
  for (NodeId n : candidates) {
    if (net.nodes[n].z() < net.nodes[best].z() || (net.nodes[n].z() == net.nodes[best].z() && n < best)) best = n;
  }
  return best;
}

std::string length_label(double mm) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f mm", mm);
  return buf;
}

}  // namespace

AssemblyPlan assembly_order(const EdgeNetwork& net, std::optional<NodeId> start) {
  if (start && *start >= net.nodes.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "start node " + std::to_string(*start) + " does not exist");
  }
  const auto adj = adjacency(net);

  // Components by size (parts), ties broken by their smallest node.
  std::vector<int> comp(net.nodes.size(), -1);
  std::vector<std::vector<NodeId>> members;
  for (NodeId n = 0; n < net.nodes.size(); ++n) {
    if (comp[n] >= 0 || adj[n].empty()) continue;
    const int c = static_cast<int>(members.size());
    members.emplace_back();
    std::vector<NodeId> stack{n};
    comp[n] = c;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      members[c].push_back(u);
      for (const auto& [v, e] : adj[u]) {
        if (comp[v] < 0) {
          comp[v] = c;
          stack.push_back(v);
        }
      }
    }
    std::sort(members[c].begin(), members[c].end());
  }
  std::vector<std::size_t> parts(members.size(), 0);
  for (std::size_t c = 0; c < members.size(); ++c) parts[c] = members[c].size();
  for (EdgeId e = 0; e < net.edges.size(); ++e) ++parts[static_cast<std::size_t>(comp[net.edges[e].a])];
  std::vector<std::size_t> order(members.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return parts[x] > parts[y]; });

  AssemblyPlan plan;
  std::vector<char> visited(net.nodes.size(), 0);
  std::vector<char> placed_edge(net.edges.size(), 0);
  std::function<void(NodeId)> visit = [&](NodeId u) {
    visited[u] = 1;
    plan.steps.push_back({StepKind::kPlaceJoint, u});
    for (const auto& [v, e] : adj[u]) {
      if (!placed_edge[e]) {
        placed_edge[e] = 1;
        plan.steps.push_back({StepKind::kPlaceRod, e});
      }
    }
    for (const auto& [v, e] : adj[u]) {
      if (!visited[v]) visit(v);
    }
  };
  for (std::size_t c : order) {
    plan.component_starts.push_back(plan.steps.size());
    NodeId root = lowest_node(net, members[c]);
    if (start && comp[*start] == static_cast<int>(c)) root = *start;
    visit(root);
  }
  return plan;
}

StepView step_view(const AssemblyPlan& plan, std::size_t index, const EdgeNetwork& net,
                   const FabricationParams& params) {
  if (index >= plan.steps.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "step " + std::to_string(index) + " of " + std::to_string(plan.steps.size()));
  }
  const DerivedData derived = derive(net, params);
  StepView view;
  view.focus = plan.steps[index];
  view.context.assign(plan.steps.begin(), plan.steps.begin() + static_cast<std::ptrdiff_t>(index));
  for (std::size_t i = index + 1; i < plan.steps.size(); ++i) {
    const AssemblyStep& s = plan.steps[i];
    (s.kind == StepKind::kPlaceJoint ? view.future_nodes : view.future_edges).push_back(s.part);
  }

  // Rod axis end points, used as the reference points of a rod.
  auto rod_ends = [&](EdgeId e) {
    const DerivedEdge& d = derived.edges[e];
    const Vec3 tip = net.nodes[d.frame.tip];
    return std::pair<Vec3, Vec3>{tip + d.offset_tip * d.frame.direction,
                                 tip + (d.offset_tip + std::max(d.rod_length, 0.0)) * d.frame.direction};
  };
  if (view.focus.kind == StepKind::kPlaceJoint) {
    const NodeId n = view.focus.part;
    view.label = node_label(n);
    view.camera_target = net.nodes[n];
    for (EdgeId e : net.incident_edges(n)) {
      const auto [a, b] = rod_ends(e);
      view.framing_radius =
          std::max({view.framing_radius, (a - view.camera_target).norm(), (b - view.camera_target).norm()});
    }
    try {
      view.focus_mesh = merge(joint_proxy(net, params, derived, n));
    } catch (const Error&) {
      // Unbuildable joints are shown without geometry; diagnostics flag them.
    }
  } else {
    const EdgeId e = view.focus.part;
    const DerivedEdge& d = derived.edges[e];
    view.rod_length = d.rod_length;
    view.label = length_label(d.rod_length);
    const auto [a, b] = rod_ends(e);
    view.camera_target = 0.5 * (a + b);
    for (NodeId n : {d.frame.tip, d.frame.tail}) {
      view.framing_radius = std::max(view.framing_radius, (net.nodes[n] - view.camera_target).norm());
    }
    try {
      view.focus_mesh = rod_solid(net, params, derived, e);
    } catch (const Error&) {
    }
  }
  return view;
}

std::string assembly_text(const AssemblyPlan& plan, const DerivedData& derived) {
  std::string out;
  char buf[160];
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const AssemblyStep& s = plan.steps[i];
    if (s.kind == StepKind::kPlaceJoint) {
      std::snprintf(buf, sizeof buf, "%zu joint %s\n", i + 1, node_label(s.part).c_str());
    } else {
      const DerivedEdge& d = derived.edges[s.part];
      std::snprintf(buf, sizeof buf, "%zu rod %zu (%s-%s) %.4f mm\n", i + 1, s.part, node_label(d.frame.tip).c_str(),
                    node_label(d.frame.tail).c_str(), d.rod_length);
    }
    out += buf;
  }
  return out;
}

nlohmann::json assembly_to_json(const AssemblyPlan& plan, const DerivedData& derived) {
  nlohmann::json steps = nlohmann::json::array();
  for (const AssemblyStep& s : plan.steps) {
    if (s.kind == StepKind::kPlaceJoint) {
      steps.push_back({{"kind", "joint"}, {"node", s.part}, {"id", node_label(s.part)}});
    } else {
      const DerivedEdge& d = derived.edges[s.part];
      steps.push_back({{"kind", "rod"}, {"edge", s.part}, {"tip", d.frame.tip}, {"tail", d.frame.tail},
                       {"length", d.rod_length}});
    }
  }
  return {{"steps", steps}, {"component_starts", plan.component_starts}};
}

}  // namespace rodjoint
