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

#include "tritri.hpp"

#include <algorithm>

namespace rodjoint::exact {

namespace {

bool all_same_nonzero(const std::array<int, 3>& s) {
  return (s[0] > 0 && s[1] > 0 && s[2] > 0) || (s[0] < 0 && s[1] < 0 && s[2] < 0);
}

// Points where triangle t meets the plane of `plane` (1 or 2 points).
std::vector<QPoint> plane_section(const Tri& plane, const Tri& t, const std::array<int, 3>& s) {
  std::vector<QPoint> pts;
  for (int i = 0; i < 3; ++i) {
    if (s[i] == 0) pts.emplace_back(t[i]);
  }
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    if (s[i] * s[j] < 0) {
      const Q oi = orient3d_value(plane[0], plane[1], plane[2], t[i]);
      const Q oj = orient3d_value(plane[0], plane[1], plane[2], t[j]);
      pts.push_back(lerp(QPoint(t[i]), QPoint(t[j]), Q(oi / (oi - oj))));
    }
  }
  return pts;
}

}  // namespace

std::array<int, 3> plane_signs(const Tri& plane, const Tri& t) {
  return {orient3d(plane[0], plane[1], plane[2], t[0]), orient3d(plane[0], plane[1], plane[2], t[1]),
          orient3d(plane[0], plane[1], plane[2], t[2])};
}

std::optional<QSegment> clip_to_triangle(const QPoint& p, const QPoint& q, const Tri& t, int u, int v) {
  const int s = orient2d(t[0], t[1], t[2], u, v);
  if (s == 0) return std::nullopt;
  const QPoint corners[3] = {QPoint(t[0]), QPoint(t[1]), QPoint(t[2])};
  Q lo(0), hi(1);
  for (int i = 0; i < 3; ++i) {
    const QPoint& e0 = corners[i];
    const QPoint& e1 = corners[(i + 1) % 3];
    const int sp = s * orient2d(e0, e1, p, u, v);
    const int sq = s * orient2d(e0, e1, q, u, v);
    if (sp < 0 && sq < 0) return std::nullopt;
    if (sp >= 0 && sq >= 0) continue;
    const Q fp = orient2d_value(e0, e1, p, u, v);
    const Q fq = orient2d_value(e0, e1, q, u, v);
    const Q cut = fp / (fp - fq);
    if (sp < 0) {
      if (cut > lo) lo = cut;
    } else {
      if (cut < hi) hi = cut;
    }
    if (lo > hi) return std::nullopt;
  }
  QSegment seg{sgn(lo) == 0 ? p : lerp(p, q, lo), hi == 1 ? q : lerp(p, q, hi)};
  return seg;
}

bool in_closed_triangle(const QPoint& p, const Tri& t, int u, int v) {
  const int s = orient2d(t[0], t[1], t[2], u, v);
  const QPoint c[3] = {QPoint(t[0]), QPoint(t[1]), QPoint(t[2])};
  for (int i = 0; i < 3; ++i) {
    if (s * orient2d(c[i], c[(i + 1) % 3], p, u, v) < 0) return false;
  }
  return true;
}

bool in_open_triangle(const QPoint& p, const Tri& t, int u, int v) {
  const int s = orient2d(t[0], t[1], t[2], u, v);
  const QPoint c[3] = {QPoint(t[0]), QPoint(t[1]), QPoint(t[2])};
  for (int i = 0; i < 3; ++i) {
    if (s * orient2d(c[i], c[(i + 1) % 3], p, u, v) <= 0) return false;
  }
  return true;
}

TriTriResult intersect_triangles(const Tri& a, const Tri& b) {
  TriTriResult result;
  const auto sb = plane_signs(a, b);
  if (all_same_nonzero(sb)) return result;
  if (sb[0] == 0 && sb[1] == 0 && sb[2] == 0) {
    result.coplanar = true;
    const int k = dominant_axis(normal(a[0], a[1], a[2]));
    const int u = (k + 1) % 3, v = (k + 2) % 3;
    for (int i = 0; i < 3; ++i) {
      if (auto s = clip_to_triangle(QPoint(b[i]), QPoint(b[(i + 1) % 3]), a, u, v)) {
        result.segments.push_back(std::move(*s));
      }
      if (auto s = clip_to_triangle(QPoint(a[i]), QPoint(a[(i + 1) % 3]), b, u, v)) {
        result.segments.push_back(std::move(*s));
      }
    }
    return result;
  }
  const auto sa = plane_signs(b, a);
  if (all_same_nonzero(sa)) return result;

  std::vector<QPoint> pa = plane_section(b, a, sa);
  std::vector<QPoint> pb = plane_section(a, b, sb);
  const auto na = normal(a[0], a[1], a[2]);
  const auto nb = normal(b[0], b[1], b[2]);
  const std::array<Q, 3> dir{na[1] * nb[2] - na[2] * nb[1], na[2] * nb[0] - na[0] * nb[2],
                             na[0] * nb[1] - na[1] * nb[0]};
  const int k = dominant_axis(dir);
  auto by_param = [k](const QPoint& x, const QPoint& y) { return x[k] < y[k]; };
  std::sort(pa.begin(), pa.end(), by_param);
  std::sort(pb.begin(), pb.end(), by_param);
  const QPoint& lo = by_param(pa.front(), pb.front()) ? pb.front() : pa.front();
  const QPoint& hi = by_param(pa.back(), pb.back()) ? pa.back() : pb.back();
  if (hi[k] < lo[k]) return result;
  result.segments.push_back({lo, hi});
  return result;
}

}  // namespace rodjoint::exact
