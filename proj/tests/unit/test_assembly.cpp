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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>

#include "rodjoint/assembly.hpp"
#include "test_support.hpp"

namespace rodjoint {
namespace {

AssemblyStep J(std::size_t n) { return {StepKind::kPlaceJoint, n}; }
AssemblyStep R(std::size_t e) { return {StepKind::kPlaceRod, e}; }

std::vector<AssemblyStep> steps_of(const EdgeNetwork& net, std::optional<NodeId> start = std::nullopt) {
  return assembly_order(net, start).steps;
}

TEST(AssemblyOrder, PathFromNodeZero) {
  const Document doc = testing::load_fixture("path");
  EXPECT_EQ(steps_of(doc.network, 0), (std::vector<AssemblyStep>{J(0), R(0), J(1), R(1), J(2)}));
}

TEST(AssemblyOrder, TriangleTracesTheRule) {
  EdgeNetwork net;
  net.nodes = {Vec3(0, 0, 0), Vec3(100, 0, 0), Vec3(0, 100, 0)};
  net.edges = {{0, 1}, {1, 2}, {0, 2}};
  // Edge {0,2} is id 2 and edge {1,2} is id 1.
  EXPECT_EQ(steps_of(net, 0), (std::vector<AssemblyStep>{J(0), R(0), R(2), J(1), R(1), J(2)}));
}

TEST(AssemblyOrder, DefaultStartIsLowestNode) {
  EdgeNetwork net;
  net.nodes = {Vec3(0, 0, 50), Vec3(100, 0, 10), Vec3(200, 0, 10)};
  net.edges = {{0, 1}, {1, 2}};
  EXPECT_EQ(steps_of(net).front(), J(1));
  EXPECT_EQ(steps_of(net), (std::vector<AssemblyStep>{J(1), R(0), R(1), J(0), J(2)}));
}

TEST(AssemblyOrder, ComponentsLargestFirstAndIsolatedNodesSkipped) {
  EdgeNetwork net;
  net.nodes = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(5, 0, 0), Vec3(6, 0, 0), Vec3(7, 0, 0), Vec3(9, 9, 9)};
  net.edges = {{0, 1}, {2, 3}, {3, 4}};
  const AssemblyPlan plan = assembly_order(net);
  EXPECT_EQ(plan.steps, (std::vector<AssemblyStep>{J(2), R(1), J(3), R(2), J(4), J(0), R(0), J(1)}));
  EXPECT_EQ(plan.component_starts, (std::vector<std::size_t>{0, 5}));
}

TEST(AssemblyOrder, InvalidStartThrows) {
  const Document doc = testing::load_fixture("path");
  try {
    assembly_order(doc.network, 3);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
}

// Union-find over joints (ids 0..n-1) and rods (ids n..n+m-1).
struct Components {
  explicit Components(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

// Every node with an edge and every edge appears once, rods follow a placed
// endpoint joint and each prefix is one connected piece.
void expect_valid_plan(const EdgeNetwork& net, const AssemblyPlan& plan) {
  const std::size_t n = net.nodes.size(), m = net.edges.size();
  std::vector<int> seen(n + m, 0);
  std::vector<char> placed(n + m, 0);
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const AssemblyStep& s = plan.steps[i];
    const std::size_t id = s.kind == StepKind::kPlaceJoint ? s.part : n + s.part;
    ++seen[id];
    placed[id] = 1;
    if (s.kind == StepKind::kPlaceRod) {
      const Edge& e = net.edges[s.part];
      EXPECT_TRUE(placed[e.a] || placed[e.b]) << "rod " << s.part << " at step " << i;
    }
    Components uf(n + m);
    for (EdgeId e = 0; e < m; ++e) {
      if (!placed[n + e]) continue;
      for (NodeId v : {net.edges[e].a, net.edges[e].b}) {
        if (placed[v]) uf.join(n + e, v);
      }
    }
    std::set<std::size_t> roots;
    for (std::size_t p = 0; p < n + m; ++p) {
      if (placed[p]) roots.insert(uf.find(p));
    }
    EXPECT_EQ(roots.size(), 1u) << "prefix " << i + 1;
  }
  for (std::size_t p = 0; p < n + m; ++p) EXPECT_EQ(seen[p], 1) << p;
  EXPECT_EQ(plan.steps.size(), n + m);
}

TEST(AssemblyOrder, TowerHasEightyPrefixConnectedSteps) {
  const Document doc = testing::tower_document();
  ASSERT_EQ(doc.network.nodes.size(), 28u);
  ASSERT_EQ(doc.network.edges.size(), 52u);
  const AssemblyPlan plan = assembly_order(doc.network);
  EXPECT_EQ(plan.steps.size(), 80u);
  expect_valid_plan(doc.network, plan);
  EXPECT_EQ(assembly_order(doc.network).steps, plan.steps);
}

TEST(AssemblyOrder, FixturesAreValidFromEveryStart) {
  for (const char* name : {"tetrahedron", "cube_frame", "three_way", "path"}) {
    const Document doc = testing::load_fixture(name);
    for (NodeId s = 0; s < doc.network.nodes.size(); ++s) {
      SCOPED_TRACE(std::string(name) + " start " + std::to_string(s));
      const AssemblyPlan plan = assembly_order(doc.network, s);
      EXPECT_EQ(plan.steps.front(), J(s));
      expect_valid_plan(doc.network, plan);
    }
  }
}

TEST(StepView, FirstAndLastSteps) {
  const Document doc = testing::load_fixture("tetrahedron");
  const AssemblyPlan plan = assembly_order(doc.network);
  const StepView first = step_view(plan, 0, doc.network, doc.params);
  EXPECT_TRUE(first.context.empty());
  EXPECT_EQ(first.future_nodes.size() + first.future_edges.size(), plan.steps.size() - 1);
  EXPECT_EQ(first.focus, plan.steps[0]);
  const StepView last = step_view(plan, plan.steps.size() - 1, doc.network, doc.params);
  EXPECT_TRUE(last.future_nodes.empty());
  EXPECT_TRUE(last.future_edges.empty());
  EXPECT_EQ(last.context.size(), plan.steps.size() - 1);
}

TEST(StepView, JointAndRodDisplay) {
  const Document doc = testing::load_fixture("path");
  const AssemblyPlan plan = assembly_order(doc.network, 0);
  const DerivedData derived = derive(doc.network, doc.params);

  const StepView joint = step_view(plan, 2, doc.network, doc.params);
  ASSERT_EQ(joint.focus, J(1));
  EXPECT_EQ(joint.label, "01");
  EXPECT_EQ(joint.camera_target, doc.network.nodes[1]);
  EXPECT_FALSE(joint.focus_mesh.faces.empty());
  // The furthest reference point is the far end of an incident rod.
  const double far = std::max((doc.network.nodes[0] - doc.network.nodes[1]).norm() - derived.edges[0].offset_tip,
                              (doc.network.nodes[2] - doc.network.nodes[1]).norm() - derived.edges[1].offset_tail);
  EXPECT_NEAR(joint.framing_radius, far, 1e-9);

  const StepView rod = step_view(plan, 3, doc.network, doc.params);
  ASSERT_EQ(rod.focus, R(1));
  EXPECT_EQ(rod.rod_length, derived.edges[1].rod_length);
  char expected[32];
  std::snprintf(expected, sizeof expected, "%.1f mm", derived.edges[1].rod_length);
  EXPECT_EQ(rod.label, expected);
  const Vec3 dir = (doc.network.nodes[2] - doc.network.nodes[1]).normalized();
  const Vec3 mid = doc.network.nodes[1] + (derived.edges[1].offset_tip + 0.5 * rod.rod_length) * dir;
  EXPECT_NEAR(rod.camera_target.x(), mid.x(), 1e-9);
  EXPECT_NEAR(rod.camera_target.y(), mid.y(), 1e-9);
  EXPECT_NEAR(rod.framing_radius,
              std::max((doc.network.nodes[1] - mid).norm(), (doc.network.nodes[2] - mid).norm()), 1e-9);
}

TEST(StepView, IndexOutOfRange) {
  const Document doc = testing::load_fixture("path");
  const AssemblyPlan plan = assembly_order(doc.network);
  try {
    step_view(plan, plan.steps.size(), doc.network, doc.params);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
}

TEST(AssemblyText, OneLinePerStepWithLengths) {
  const Document doc = testing::load_fixture("path");
  const DerivedData derived = derive(doc.network, doc.params);
  const AssemblyPlan plan = assembly_order(doc.network, 0);
  const std::string text = assembly_text(plan, derived);
  char rod0[96];
  std::snprintf(rod0, sizeof rod0, "2 rod 0 (00-01) %.4f mm\n", derived.edges[0].rod_length);
  EXPECT_EQ(text.substr(0, 11), "1 joint 00\n");
  EXPECT_NE(text.find(rod0), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  const nlohmann::json j = assembly_to_json(plan, derived);
  ASSERT_EQ(j.at("steps").size(), 5u);
  EXPECT_EQ(j.at("steps")[0].at("id"), "00");
  EXPECT_DOUBLE_EQ(j.at("steps")[1].at("length").get<double>(), derived.edges[0].rod_length);
}

}  // namespace
}  // namespace rodjoint
