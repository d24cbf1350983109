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

// Exact geometric predicates. Double-precision evaluation with a
// conservative error bound decides the easy cases; everything else is
// recomputed with GMP rationals.

#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <functional>

#include "rodjoint/types.hpp"

namespace rodjoint::exact {

using Q = mpq_class;

inline int sign(const Q& q) { return sgn(q); }

/// A point with rational coordinates and its nearest double approximation.
struct QPoint {
  std::array<Q, 3> c;
  Vec3 approx = Vec3::Zero();

  QPoint() = default;
  explicit QPoint(const Vec3& v) : c{Q(v.x()), Q(v.y()), Q(v.z())}, approx(v) {}
  QPoint(Q x, Q y, Q z) : c{std::move(x), std::move(y), std::move(z)} { refresh(); }

  void refresh() { approx = Vec3(c[0].get_d(), c[1].get_d(), c[2].get_d()); }
  const Q& operator[](std::size_t i) const { return c[i]; }

  friend bool operator==(const QPoint& a, const QPoint& b) {
    return a.approx == b.approx && a.c[0] == b.c[0] && a.c[1] == b.c[1] && a.c[2] == b.c[2];
  }
};

struct QPointHash {
  std::size_t operator()(const QPoint& p) const {
    std::size_t h = std::hash<double>{}(p.approx.x());
    h ^= std::hash<double>{}(p.approx.y()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<double>{}(p.approx.z()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

/// Sign of (b-a) x (c-a) . (d-a): positive when d lies on the side the
/// right-hand normal of triangle (a, b, c) points to.
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
int orient3d(const QPoint& a, const QPoint& b, const QPoint& c, const QPoint& d);

/// Exact value of the same determinant for double inputs.
Q orient3d_value(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Exact normal (b-a) x (c-a) of a triangle with double corners.
std::array<Q, 3> normal(const Vec3& a, const Vec3& b, const Vec3& c);

/// 2D orientation of the projections of three points onto the coordinate
/// plane spanned by axes (u, v).
int orient2d(const QPoint& a, const QPoint& b, const QPoint& c, int u, int v);
int orient2d(const Vec3& a, const Vec3& b, const Vec3& c, int u, int v);

/// Exact value of the 2D orientation determinant.
Q orient2d_value(const QPoint& a, const QPoint& b, const QPoint& c, int u, int v);

/// Whether p lies on the line through a and b (a != b).
bool collinear(const QPoint& a, const QPoint& b, const QPoint& p);

/// For p known to be on line ab: whether it lies strictly between a and b.
bool strictly_between(const QPoint& a, const QPoint& b, const QPoint& p);

/// a + t (b - a) with rational t.
QPoint lerp(const QPoint& a, const QPoint& b, const Q& t);

/// Index of the coordinate with the largest magnitude, and that
/// coordinate's sign.
int dominant_axis(const std::array<Q, 3>& n, int* sign_out = nullptr);

}  // namespace rodjoint::exact
