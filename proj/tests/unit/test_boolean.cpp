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
#include <random>

#include "rodjoint/boolean.hpp"
#include "rodjoint/intersect.hpp"
#include "test_support.hpp"

namespace rodjoint {
namespace {

using testing::oracle_solid;
using testing::oracle_volume;

struct Box {
  Vec3 lo, hi;
  TriMesh mesh() const { return box_mesh(lo, hi); }
};

// Volume of (union of added) minus (union of removed) by coordinate
// compression: each grid cell is classified by its center.
double compressed_volume(const std::vector<Box>& added, const std::vector<Box>& removed) {
  std::array<std::vector<double>, 3> cuts;
  for (const auto* list : {&added, &removed}) {
    for (const Box& b : *list) {
      for (int k = 0; k < 3; ++k) {
        cuts[k].push_back(b.lo[k]);
        cuts[k].push_back(b.hi[k]);
      }
    }
  }
  for (auto& c : cuts) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  auto inside = [](const std::vector<Box>& list, const Vec3& p) {
    return std::any_of(list.begin(), list.end(), [&](const Box& b) {
      return (p.array() > b.lo.array()).all() && (p.array() < b.hi.array()).all();
    });
  };
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts[0].size(); ++i) {
    for (std::size_t j = 0; j + 1 < cuts[1].size(); ++j) {
      for (std::size_t k = 0; k + 1 < cuts[2].size(); ++k) {
        const Vec3 c(0.5 * (cuts[0][i] + cuts[0][i + 1]), 0.5 * (cuts[1][j] + cuts[1][j + 1]),
                     0.5 * (cuts[2][k] + cuts[2][k + 1]));
        if (inside(added, c) && !inside(removed, c)) {
          total += (cuts[0][i + 1] - cuts[0][i]) * (cuts[1][j + 1] - cuts[1][j]) * (cuts[2][k + 1] - cuts[2][k]);
        }
      }
    }
  }
  return total;
}

Box random_box(std::mt19937_64& rng, bool on_grid) {
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::uniform_int_distribution<int> gi(0, 8);
  Vec3 a, b;
  for (int k = 0; k < 3; ++k) {
    do {
      a[k] = on_grid ? 0.5 * gi(rng) : u(rng);
      b[k] = on_grid ? 0.5 * gi(rng) : u(rng);
    } while (a[k] == b[k]);
  }
  return {a.cwiseMin(b), a.cwiseMax(b)};
}

void expect_result(const TriMesh& result, double expected, const std::string& what) {
  if (expected < 1e-12) {
    EXPECT_LT(std::abs(oracle_volume(result)), 1e-9) << what;
    return;
  }
  std::string why;
  EXPECT_TRUE(oracle_solid(result, &why)) << what << ": " << why;
  EXPECT_NEAR(oracle_volume(result), expected, 1e-9 * std::max(1.0, expected)) << what;
}

TEST(Boolean, Examples) {
  const TriMesh unit = box_mesh(Vec3::Zero(), Vec3::Ones());
  expect_result(boolean(BooleanOp::kUnion, unit, box_mesh(Vec3(3, 0, 0), Vec3(4, 1, 1))), 2.0, "disjoint union");
  EXPECT_TRUE(boolean(BooleanOp::kDifference, unit, unit).empty());
  expect_result(boolean(BooleanOp::kDifference, unit, box_mesh(Vec3(0.5, 0, 0), Vec3(1.5, 1, 1))), 0.5,
                "shifted difference");
}

TEST(Boolean, RandomBoxPairsMatchIntervalOracle) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const bool grid = trial % 2 == 0;  // grid boxes share faces and edges exactly
    const Box a = random_box(rng, grid), b = random_box(rng, grid);
    const double va = compressed_volume({a}, {}), vb = compressed_volume({b}, {});
    const double overlap = testing::box_overlap(a.lo, a.hi, b.lo, b.hi);
    const std::string tag = "trial " + std::to_string(trial);
    expect_result(boolean(BooleanOp::kUnion, a.mesh(), b.mesh()), va + vb - overlap, tag + " union");
    expect_result(boolean(BooleanOp::kIntersection, a.mesh(), b.mesh()), overlap, tag + " intersection");
    expect_result(boolean(BooleanOp::kDifference, a.mesh(), b.mesh()), va - overlap, tag + " difference");
  }
}

TEST(Boolean, NaryUnionMinusMatchesOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Box> added, removed;
    for (int i = 0; i < 4; ++i) added.push_back(random_box(rng, trial % 2 == 0));
    for (int i = 0; i < 2; ++i) removed.push_back(random_box(rng, trial % 2 == 0));
    std::vector<TriMesh> am, rm;
    for (const Box& b : added) am.push_back(b.mesh());
    for (const Box& b : removed) rm.push_back(b.mesh());
    expect_result(union_minus(am, rm), compressed_volume(added, removed), "trial " + std::to_string(trial));
  }
}

TEST(Boolean, RotatedOperandsKeepVolume) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const Box a = random_box(rng, true), b = random_box(rng, true);
    const Affine rot{rotation_to(Vec3(g(rng), g(rng), g(rng)).normalized()), Vec3(g(rng), g(rng), g(rng))};
    const double overlap = testing::box_overlap(a.lo, a.hi, b.lo, b.hi);
    const double expected = compressed_volume({a}, {}) - overlap;
    const TriMesh r = boolean(BooleanOp::kDifference, transform(a.mesh(), rot), transform(b.mesh(), rot));
    if (expected < 1e-9) continue;
    std::string why;
    EXPECT_TRUE(oracle_solid(r, &why)) << why;
    EXPECT_NEAR(oracle_volume(r), expected, 1e-7 * std::max(1.0, expected));
  }
}

TEST(Boolean, PrismsThroughEachOther) {
  const TriMesh a = transform(unit_prism(32), Affine{Mat3(Vec3(3, 3, 20).asDiagonal()), Vec3(0, 0, -10)});
  const TriMesh b = transform(a, Affine{rotation_to(Vec3(1, 0, 1).normalized()), Vec3::Zero()});
  const TriMesh u = boolean(BooleanOp::kUnion, a, b);
  const TriMesh i = boolean(BooleanOp::kIntersection, a, b);
  EXPECT_TRUE(oracle_solid(u));
  EXPECT_TRUE(oracle_solid(i));
  // Inclusion-exclusion holds exactly for any pair.
  EXPECT_NEAR(oracle_volume(u) + oracle_volume(i), oracle_volume(a) + oracle_volume(b), 1e-8);
  EXPECT_TRUE(intersect_meshes(a, b));
}

TEST(Boolean, RejectsOpenOperand) {
  TriMesh open = box_mesh(Vec3::Zero(), Vec3::Ones());
  open.faces.pop_back();
  try {
    boolean(BooleanOp::kUnion, open, box_mesh(Vec3::Ones(), Vec3::Constant(2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotSolid);
  }
}

TEST(Boolean, EmptyOperands) {
  const TriMesh unit = box_mesh(Vec3::Zero(), Vec3::Ones());
  expect_result(boolean(BooleanOp::kUnion, unit, TriMesh{}), 1.0, "union with empty");
  EXPECT_TRUE(boolean(BooleanOp::kIntersection, unit, TriMesh{}).empty());
}

}  // namespace
}  // namespace rodjoint
