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

#include <cmath>
#include <numbers>

#include "rodjoint/intersect.hpp"
#include "rodjoint/joint.hpp"
#include "test_support.hpp"

namespace rodjoint {
namespace {

using std::numbers::pi;

double regular_area(double radius, int p) { return 0.5 * p * radius * radius * std::sin(2 * pi / p); }

// Node 0 at the origin with unit edges to the given directions.
EdgeNetwork star(const std::vector<Vec3>& dirs, double length = 100.0) {
  EdgeNetwork net;
  net.nodes.push_back(Vec3::Zero());
  for (const Vec3& d : dirs) {
    net.edges.push_back({0, net.nodes.size()});
    net.nodes.push_back(length * d.normalized());
  }
  return net;
}

Vec3 polar(double degrees) { return Vec3(std::cos(degrees * pi / 180), std::sin(degrees * pi / 180), 0); }

TEST(MinCos, Examples) {
  EXPECT_DOUBLE_EQ(*compute_min_cos(star({Vec3::UnitX(), Vec3::UnitY()}), 0, 0), 0.0);
  // Target along x, others at 60 and 90 degrees from it.
  const EdgeNetwork net = star({Vec3::UnitX(), polar(60), Vec3::UnitZ()});
  EXPECT_NEAR(*compute_min_cos(net, 0, 0), 0.5, 1e-15);
  EXPECT_FALSE(compute_min_cos(star({Vec3::UnitX()}), 0, 0).has_value());
}

TEST(SafeOffset, Examples) {
  EXPECT_EQ(safe_offset(0.0, 5.0), 5.0);
  EXPECT_NEAR(safe_offset(0.5, 1.0), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(safe_offset(std::cos(16 * pi / 180), 1.0), 1.0 / std::tan(8 * pi / 180), 1e-9);
  EXPECT_EQ(safe_offset(std::nullopt, 3.0), 0.0);
  for (double c : {1.0, 1.0 - 1e-7, -1.0}) {
    try {
      safe_offset(c, 1.0);
      ADD_FAILURE() << c;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDegenerateAngle);
    }
  }
}

TEST(SocketPieces, AxialExtentsAndRadius) {
  EdgeNetwork net;
  net.nodes = {Vec3::Zero(), Vec3(0, 0, 100)};
  net.edges = {{0, 1}};
  FabricationParams params;
  params.rod_radius = 5.0;
  params.thickness = 2.0;
  params.socket_length = 15.0;
  DerivedData derived = derive(net, params);
  derived.edges[0].offset_tip = 10.0;
  derived.edges[0].offset_tail = 10.0;
  derived.edges[0].rod_length = 80.0;
  const auto [tip, tail] = socket_pieces(net, params, derived, 0);
  auto zrange = [](const TriMesh& m) { return std::pair{m.bounds().min().z(), m.bounds().max().z()}; };
  EXPECT_NEAR(zrange(tip.mesh).first, 8.0, 1e-12);
  EXPECT_NEAR(zrange(tip.mesh).second, 25.0, 1e-12);
  EXPECT_NEAR(zrange(tail.mesh).first, 75.0, 1e-12);
  EXPECT_NEAR(zrange(tail.mesh).second, 92.0, 1e-12);
  for (const Vec3& v : tip.mesh.vertices) EXPECT_NEAR(std::hypot(v.x(), v.y()), 7.0, 1e-12);
  EXPECT_EQ(tip.outlet_vertices, prism_base_ring(params.profile.sides()));
  EXPECT_EQ(tail.outlet_vertices, prism_top_ring(params.profile.sides()));
  for (auto v : tip.outlet_vertices) EXPECT_NEAR(tip.mesh.vertices[v].z(), 8.0, 1e-12);
  for (auto v : tail.outlet_vertices) EXPECT_NEAR(tail.mesh.vertices[v].z(), 92.0, 1e-12);
}

TEST(RodLength, EqualsEdgeMinusOffsetsOnFixtures) {
  for (const std::string& name : testing::solidity_fixtures()) {
    const Document doc = testing::load_fixture(name);
    const DerivedData d = derive(doc.network, doc.params);
    for (EdgeId e = 0; e < doc.network.edges.size(); ++e) {
      const double len = (doc.network.nodes[doc.network.edges[e].b] - doc.network.nodes[doc.network.edges[e].a]).norm();
      EXPECT_EQ(d.edges[e].rod_length, len - d.edges[e].offset_tip - d.edges[e].offset_tail) << name;
      // Rod solid spans exactly l along the axis.
      const TriMesh rod = rod_solid(doc.network, doc.params, d, e);
      const Vec3 w = d.edges[e].frame.direction;
      double lo = 1e300, hi = -1e300;
      for (const Vec3& v : rod.vertices) {
        lo = std::min(lo, w.dot(v - doc.network.nodes[d.edges[e].frame.tip]));
        hi = std::max(hi, w.dot(v - doc.network.nodes[d.edges[e].frame.tip]));
      }
      EXPECT_NEAR(hi - lo, d.edges[e].rod_length, 1e-9);
      EXPECT_NEAR(lo, d.edges[e].offset_tip, 1e-9);
    }
  }
}

TEST(RodLength, OffsetsSurviveUniformScaling) {
  const Document doc = testing::load_fixture("tetrahedron");
  Document big = doc;
  for (Vec3& p : big.network.nodes) p *= 2.0;
  const DerivedData a = derive(doc.network, doc.params), b = derive(big.network, big.params);
  for (EdgeId e = 0; e < a.edges.size(); ++e) {
    EXPECT_NEAR(b.edges[e].offset_tip, a.edges[e].offset_tip, 1e-12);
    EXPECT_NEAR(b.edges[e].rod_length, 2 * a.edges[e].frame.length - a.edges[e].offset_tip - a.edges[e].offset_tail,
                1e-9);
  }
}

// Two edges leaving each end of a segment at a chosen angle, so that the
// offset at both ends of the segment is r_eff * cot(theta / 2).
EdgeNetwork segment_with_offset(double length, double g, double r_eff) {
  const double theta = 2 * std::atan(r_eff / g);
  EdgeNetwork net;
  net.nodes = {Vec3::Zero(), Vec3(length, 0, 0), 60 * polar(theta * 180 / pi),
               Vec3(length, 0, 0) + 60 * polar(180 - theta * 180 / pi)};
  net.edges = {{0, 1}, {0, 2}, {1, 3}};
  return net;
}

TEST(Swallowed, Examples) {
  FabricationParams params;
  params.rod_radius = 0.9;
  params.tolerance = 0.1;
  params.socket_length = 10.0;
  const DerivedData d = derive(segment_with_offset(50, 20, 1.0), params);
  EXPECT_NEAR(d.edges[0].offset_tip, 20.0, 1e-9);
  EXPECT_NEAR(d.edges[0].offset_tail, 20.0, 1e-9);
  EXPECT_TRUE(d.edges[0].swallowed);
  EXPECT_EQ(detect_swallowed(segment_with_offset(50, 20, 1.0), params), std::vector<EdgeId>{0});

  params.socket_length = 15.0;
  EXPECT_TRUE(detect_swallowed(segment_with_offset(100, 10, 1.0), params).empty());
  params.socket_length = 1e-6;
  EXPECT_TRUE(detect_swallowed(segment_with_offset(41, 20, 1.0), params).empty());

  try {
    rod_solid(segment_with_offset(50, 20, 1.0), params, d, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSwallowedEdge);
  }
}

TEST(BuildJoint, ValenceOneStubMatchesTubeVolume) {
  const Document doc = testing::load_fixture("stub");
  const FabricationParams& p = doc.params;
  const DerivedData d = derive(doc.network, p);
  const int sides = p.profile.sides();
  const double expected = regular_area(p.rod_radius + p.thickness, sides) * (p.socket_length + p.thickness) -
                          regular_area(p.rod_radius + p.tolerance, sides) * (p.socket_length + p.tolerance);
  for (NodeId n : {NodeId{0}, NodeId{1}}) {
    const JointSolid j = build_joint(doc.network, p, d, n);
    EXPECT_TRUE(testing::oracle_solid(j.mesh));
    EXPECT_NEAR(testing::oracle_volume(j.mesh), expected, 1e-9 * expected);
  }
}

TEST(BuildJoint, StraightPassThroughIsDegenerate) {
  const EdgeNetwork net = star({Vec3::UnitX(), -Vec3::UnitX()});
  const FabricationParams params;
  const DerivedData d = derive(net, params);
  EXPECT_EQ(d.degenerate_nodes, std::vector<NodeId>{0});
  try {
    build_joint(net, params, d, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateAngle);
  }
}

TEST(BuildJoint, ThreeWaySymmetry) {
  const Document doc = testing::load_fixture("three_way");
  const DerivedData d = derive(doc.network, doc.params);
  // The fixture stores its coordinates to ten significant digits, so the
  // arms are 120 degrees apart only to about 1e-12 rad.
  EXPECT_NEAR(d.edges[0].offset_tip, d.edges[1].offset_tip, 1e-9);
  EXPECT_NEAR(d.edges[0].offset_tip, d.edges[2].offset_tip, 1e-9);
  const double v0 = testing::oracle_volume(build_joint(doc.network, doc.params, d, 0).mesh);

  // Relabel the arms by a 120 degree turn: same joint, edges listed in a
  // different order.
  EdgeNetwork turned = doc.network;
  turned.edges = {{0, 2}, {0, 3}, {0, 1}};
  const double v1 = testing::oracle_volume(build_joint(turned, doc.params, derive(turned, doc.params), 0).mesh);
  EXPECT_NEAR(v1, v0, 1e-6 * v0);
  EdgeNetwork rotated = doc.network;
  const Mat3 r = Eigen::AngleAxisd(2 * pi / 3, Vec3::UnitZ()).toRotationMatrix();
  for (Vec3& p : rotated.nodes) p = r * p;
  const double v2 = testing::oracle_volume(build_joint(rotated, doc.params, derive(rotated, doc.params), 0).mesh);
  EXPECT_NEAR(v2, v0, 1e-6 * v0);
}

TEST(BuildJoint, RodsFitTheirCavities) {
  // The built joint never overlaps the rods it holds.
  const Document doc = testing::load_fixture("tetrahedron");
  const DerivedData d = derive(doc.network, doc.params);
  const JointSolid j = build_joint(doc.network, doc.params, d, 3);
  EXPECT_TRUE(testing::oracle_solid(j.mesh));
  for (EdgeId e : doc.network.incident_edges(3)) {
    EXPECT_FALSE(intersect_meshes(j.mesh, rod_solid(doc.network, doc.params, d, e))) << "edge " << e;
  }
}

TEST(BuildAllJoints, NodeOrderAndCsv) {
  const Document doc = testing::load_fixture("path");
  const DerivedData d = derive(doc.network, doc.params);
  const auto joints = build_all_joints(doc.network, doc.params, d, 2);
  ASSERT_EQ(joints.size(), 3u);
  for (NodeId n = 0; n < 3; ++n) EXPECT_EQ(joints[n].node, n);
  const std::string csv = rods_csv(doc.network, d);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);  // header + two rods
  char row[64];
  std::snprintf(row, sizeof row, "0,0,1,%.4f", d.edges[0].rod_length);
  EXPECT_NE(csv.find(row), std::string::npos) << csv;
}

}  // namespace
}  // namespace rodjoint
