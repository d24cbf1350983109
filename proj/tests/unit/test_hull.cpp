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

#include <random>
#include <set>

#include "rodjoint/hull.hpp"
#include "test_support.hpp"

namespace rodjoint {
namespace {

// Hull oracle: closed solid whose every face plane has all input points on
// its inner side, and whose vertices are input points.
void expect_hull(const TriMesh& hull, const std::vector<Vec3>& points) {
  std::string why;
  ASSERT_TRUE(testing::oracle_solid(hull, &why)) << why;
  for (const Face& f : hull.faces) {
    const Vec3 a = hull.vertices[f[0]];
    const Vec3 n = (hull.vertices[f[1]] - a).cross(hull.vertices[f[2]] - a).normalized();
    for (const Vec3& p : points) EXPECT_LE(n.dot(p - a), 1e-9);
  }
  for (const Vec3& v : hull.vertices) {
    EXPECT_TRUE(std::find(points.begin(), points.end(), v) != points.end());
  }
}

TEST(ConvexHull, Examples) {
  const std::vector<Vec3> tet{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  const TriMesh t = convex_hull(tet);
  EXPECT_EQ(t.faces.size(), 4u);
  expect_hull(t, tet);

  std::vector<Vec3> cube;
  for (int i = 0; i < 8; ++i) cube.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  const TriMesh c = convex_hull(cube);
  EXPECT_NEAR(testing::oracle_volume(c), 1.0, 1e-12);
  expect_hull(c, cube);

  cube.emplace_back(0.5, 0.5, 0.5);
  cube.emplace_back(0.5, 0.5, 1.0);  // on a face
  const TriMesh c2 = convex_hull(cube);
  EXPECT_NEAR(testing::oracle_volume(c2), 1.0, 1e-12);
  EXPECT_EQ(c2.vertices.size(), 8u);
  expect_hull(c2, cube);
}

TEST(ConvexHull, RandomClouds) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vec3> pts;
    const int n = 4 + trial * 7;
    for (int i = 0; i < n; ++i) pts.emplace_back(g(rng), g(rng), g(rng));
    expect_hull(convex_hull(pts), pts);
  }
}

TEST(ConvexHull, SocketRingsAroundANode) {
  // Rings of regular polygons, as joint hulls see them: many coplanar points.
  std::vector<Vec3> pts{Vec3::Zero()};
  for (const Vec3& dir : {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)}) {
    const Mat3 r = rotation_to(dir);
    for (int k = 0; k < 32; ++k) {
      const double a = 2 * M_PI * k / 32;
      pts.push_back(r * Vec3(5 * std::cos(a), 5 * std::sin(a), 6));
    }
  }
  expect_hull(convex_hull(pts), pts);
}

TEST(ConvexHull, DegenerateInputs) {
  for (const std::vector<Vec3>& pts :
       {std::vector<Vec3>{Vec3(0, 0, 0), Vec3(1, 1, 1), Vec3(2, 2, 2), Vec3(3, 3, 3)},
        std::vector<Vec3>{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)},
        std::vector<Vec3>{Vec3(0, 0, 0), Vec3(1, 0, 0)}}) {
    try {
      convex_hull(pts);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDegenerateHull);
    }
  }
}

TEST(ConvexHull2d, MatchesBruteForceExtremePoints) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> gi(0, 20);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 30; ++i) pts.emplace_back(gi(rng), gi(rng));
    const std::vector<Vec2> hull = convex_hull_2d(pts);
    // Oracle: strict extreme points are those outside the hull of the others.
    std::set<std::pair<double, double>> expected;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      bool extreme = false;
      // p is a vertex iff some direction makes it the unique maximum.
      for (int d = 0; d < 720 && !extreme; ++d) {
        const Vec2 dir(std::cos(d * M_PI / 360 + 1e-3), std::sin(d * M_PI / 360 + 1e-3));
        bool unique_max = true;
        for (std::size_t j = 0; j < pts.size() && unique_max; ++j) {
          if (pts[j] != pts[i] && dir.dot(pts[j]) >= dir.dot(pts[i])) unique_max = false;
        }
        extreme = unique_max;
      }
      if (extreme) expected.insert({pts[i].x(), pts[i].y()});
    }
    std::set<std::pair<double, double>> got;
    for (const Vec2& p : hull) got.insert({p.x(), p.y()});
    EXPECT_EQ(got, expected) << "trial " << trial;
    // Counter-clockwise.
    double area = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
      const Vec2& a = hull[i];
      const Vec2& b = hull[(i + 1) % hull.size()];
      area += a.x() * b.y() - a.y() * b.x();
    }
    EXPECT_GT(area, 0);
  }
}

}  // namespace
}  // namespace rodjoint
