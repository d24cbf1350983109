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

// Exact triangle/triangle intersection with rational output.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "exact.hpp"
#include "rodjoint/intersect.hpp"

namespace rodjoint::exact {

using Tri = std::array<Vec3, 3>;

/// Closed segment, possibly degenerate (a == b).
struct QSegment {
  QPoint a;
  QPoint b;
  bool is_point() const { return a == b; }
};

/// Signs of `t`'s corners relative to the plane of `plane`.
std::array<int, 3> plane_signs(const Tri& plane, const Tri& t);

struct TriTriResult {
  bool coplanar = false;
  /// Non-coplanar: at most one segment (or point). Coplanar: the pieces of
  /// each triangle's edges lying inside the other triangle.
  std::vector<QSegment> segments;
  bool empty() const { return segments.empty(); }
};

/// Full intersection of two non-degenerate triangles.
TriTriResult intersect_triangles(const Tri& a, const Tri& b);

/// Clips segment pq to the closed triangle t, all lying in one plane that
/// projects injectively onto axes (u, v).
std::optional<QSegment> clip_to_triangle(const QPoint& p, const QPoint& q, const Tri& t, int u, int v);

/// Whether point p (in the plane of t) lies in the closed triangle t.
bool in_closed_triangle(const QPoint& p, const Tri& t, int u, int v);
/// Strict interior test.
bool in_open_triangle(const QPoint& p, const Tri& t, int u, int v);

}  // namespace rodjoint::exact
