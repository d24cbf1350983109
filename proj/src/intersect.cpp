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

#include "rodjoint/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "tritri.hpp"
#include "winding.hpp"

namespace rodjoint {

// ---------------------------------------------------------------------------
// AabbTree

AabbTree::AabbTree(std::span<const Box3> boxes) : boxes_(boxes.begin(), boxes.end()) {
  if (boxes_.empty()) return;
  items_.resize(boxes_.size());
  std::iota(items_.begin(), items_.end(), 0u);
  nodes_.reserve(2 * boxes_.size() / 2 + 8);
  nodes_.emplace_back();
  build(0, 0, static_cast<std::uint32_t>(items_.size()), 0);
}

AabbTree AabbTree::of_faces(const TriMesh& mesh) {
  std::vector<Box3> boxes;
  boxes.reserve(mesh.faces.size());
  for (const Face& f : mesh.faces) {
    Box3 b(mesh.vertices[f[0]]);
    b.extend(mesh.vertices[f[1]]);
    b.extend(mesh.vertices[f[2]]);
    boxes.push_back(b);
  }
  return AabbTree(boxes);
}

void AabbTree::build(std::uint32_t node, std::uint32_t begin, std::uint32_t end, int depth) {
  Box3 box;
  for (std::uint32_t i = begin; i < end; ++i) box.extend(boxes_[items_[i]]);
  nodes_[node].box = box;
  if (end - begin <= 4 || depth > 40) {
    nodes_[node].first = begin;
    nodes_[node].count = end - begin;
    return;
  }
  int axis = 0;
  box.sizes().maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(items_.begin() + begin, items_.begin() + mid, items_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return boxes_[a].center()[axis] < boxes_[b].center()[axis];
                   });
  const auto child = static_cast<std::uint32_t>(nodes_.size());
  nodes_[node].first = child;
  nodes_[node].count = 0;
  nodes_.emplace_back();
  nodes_.emplace_back();
  build(child, begin, mid, depth + 1);
  build(child + 1, mid, end, depth + 1);
}

bool AabbTree::slab_hit(const Box3& box, const Vec3& o, const Vec3& inv, double tmax) {
  double t0 = 0.0, t1 = tmax;
  for (int i = 0; i < 3; ++i) {
    if (std::isinf(inv[i])) {
      if (o[i] < box.min()[i] || o[i] > box.max()[i]) return false;
      continue;
    }
    double a = (box.min()[i] - o[i]) * inv[i];
    double b = (box.max()[i] - o[i]) * inv[i];
    if (a > b) std::swap(a, b);
    // Inflate slightly so boxes touched at grazing angles are not missed.
    const double slack = 1e-9 * (std::abs(a) + std::abs(b)) + 1e-12;
    t0 = std::max(t0, a - slack);
    t1 = std::min(t1, b + slack);
    if (t0 > t1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Predicates

bool triangles_intersect(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b) {
  return !exact::intersect_triangles(a, b).empty();
}

namespace {

std::array<Vec3, 3> corners(const TriMesh& m, std::size_t f) {
  return {m.vertices[m.faces[f][0]], m.vertices[m.faces[f][1]], m.vertices[m.faces[f][2]]};
}

double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double la = a.norm(), lb = b.norm(), lc = c.norm();
  const double num = a.dot(b.cross(c));
  const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
  return 2.0 * std::atan2(num, den);
}

// Exact parity along a segment from q to a far point; returns nullopt when
// the segment grazes an edge or vertex.
std::optional<int> ray_parity(const TriMesh& mesh, const AabbTree& tree, const exact::QPoint& q, const Vec3& dir) {
  const Box3 bounds = tree.bounds();
  const double reach = 4.0 * (bounds.diagonal().norm() + (q.approx - bounds.center()).norm()) + 1.0;
  const exact::QPoint far(q[0] + exact::Q(reach * dir.x()), q[1] + exact::Q(reach * dir.y()),
                          q[2] + exact::Q(reach * dir.z()));
  int winding = 0;
  bool degenerate = false;
  tree.segment_query(q.approx, far.approx - q.approx, 1.0, [&](std::uint32_t f) {
    const auto t = corners(mesh, f);
    const exact::QPoint a(t[0]), b(t[1]), c(t[2]);
    const int s1 = exact::orient3d(a, b, c, q);
    const int s2 = exact::orient3d(a, b, c, far);
    if (s1 == 0 || s2 == 0 || s1 == s2) return false;
    const int o1 = exact::orient3d(q, far, a, b);
    const int o2 = exact::orient3d(q, far, b, c);
    const int o3 = exact::orient3d(q, far, c, a);
    const bool pos = o1 >= 0 && o2 >= 0 && o3 >= 0;
    const bool neg = o1 <= 0 && o2 <= 0 && o3 <= 0;
    if (!pos && !neg) return false;
    if (o1 == 0 || o2 == 0 || o3 == 0) {
      degenerate = true;
      return true;
    }
    winding += s1 < 0 ? 1 : -1;
    return false;
  });
  if (degenerate) return std::nullopt;
  return winding;
}

}  // namespace

namespace exact {

int winding_number(const TriMesh& mesh, const AabbTree& tree, const QPoint& q) {
  if (mesh.faces.empty()) return 0;
  const Vec3 p = q.approx;
  const double diag = tree.bounds().diagonal().norm();
  double total = 0.0;
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto t = corners(mesh, f);
    total += solid_angle(t[0] - p, t[1] - p, t[2] - p);
    min_dist = std::min(min_dist, (closest_point_on_triangle(p, t[0], t[1], t[2]) - p).norm());
  }
  const double w = total / (4.0 * std::numbers::pi);
  const double rounded = std::round(w);
  if (min_dist > 1e-7 * diag && std::abs(w - rounded) < 1e-3) return static_cast<int>(rounded);

  static const Vec3 kDirections[] = {
      Vec3(0.5731, 0.2283, 0.7867), Vec3(-0.3119, 0.8527, 0.4191), Vec3(0.6791, -0.5023, -0.5351),
      Vec3(-0.7193, -0.3361, 0.6081), Vec3(0.1237, -0.9041, 0.4087), Vec3(0.8813, 0.3929, -0.2633),
      Vec3(-0.2711, 0.1833, -0.9449), Vec3(0.4421, 0.6917, -0.5711)};
  for (const Vec3& d : kDirections) {
    if (auto w_exact = ray_parity(mesh, tree, q, d)) return *w_exact;
  }
  // Every probe grazed something; fall back to the rounded estimate.
  return static_cast<int>(rounded);
}

}  // namespace exact

int winding_number(const TriMesh& mesh, const AabbTree& tree, const Vec3& p) {
  return exact::winding_number(mesh, tree, exact::QPoint(p));
}

bool point_in_mesh(const TriMesh& mesh, const Vec3& p) {
  const AabbTree tree = AabbTree::of_faces(mesh);
  return winding_number(mesh, tree, p) != 0;
}

bool intersect_meshes(const TriMesh& a, const TriMesh& b) {
  if (a.faces.empty() || b.faces.empty()) return false;
  const AabbTree ta = AabbTree::of_faces(a);
  const AabbTree tb = AabbTree::of_faces(b);
  if (!ta.bounds().intersects(tb.bounds())) return false;
  bool hit = false;
  AabbTree::overlapping_pairs(ta, tb, [&](std::uint32_t fa, std::uint32_t fb) {
    if (!hit && triangles_intersect(corners(a, fa), corners(b, fb))) hit = true;
  });
  if (hit) return true;
  // Surfaces are disjoint, so containment is decided by any single vertex.
  return exact::winding_number(b, tb, exact::QPoint(a.vertices[a.faces[0][0]])) != 0 ||
         exact::winding_number(a, ta, exact::QPoint(b.vertices[b.faces[0][0]])) != 0;
}

// ---------------------------------------------------------------------------
// Rays and distances

namespace {

// Moller-Trumbore; returns t or a negative value on a miss.
double ray_triangle(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 p = d.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < 1e-300) return -1.0;
  const double inv = 1.0 / det;
  const Vec3 s = o - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return -1.0;
  const Vec3 qv = s.cross(e1);
  const double v = d.dot(qv) * inv;
  if (v < 0.0 || u + v > 1.0) return -1.0;
  return e2.dot(qv) * inv;
}

}  // namespace

std::optional<RayHit> ray_cast(const TriMesh& mesh, const AabbTree& tree, const Vec3& origin, const Vec3& dir,
                               double tmin) {
  if (tree.empty()) return std::nullopt;
  const double reach = 2.0 * (tree.bounds().diagonal().norm() + (origin - tree.bounds().center()).norm()) + 1.0;
  std::optional<RayHit> best;
  tree.segment_query(origin, dir * reach, 1.0, [&](std::uint32_t f) {
    const auto t = corners(mesh, f);
    const double s = ray_triangle(origin, dir, t[0], t[1], t[2]);
    if (s > tmin && (!best || s < best->t)) best = RayHit{s, f};
    return false;
  });
  return best;
}

bool ray_occluded(const TriMesh& mesh, const AabbTree& tree, const Vec3& origin, const Vec3& dir, double tmin) {
  if (tree.empty()) return false;
  const double reach = 2.0 * (tree.bounds().diagonal().norm() + (origin - tree.bounds().center()).norm()) + 1.0;
  bool hit = false;
  tree.segment_query(origin, dir * reach, 1.0, [&](std::uint32_t f) {
    const auto t = corners(mesh, f);
    hit = ray_triangle(origin, dir, t[0], t[1], t[2]) > tmin;
    return hit;
  });
  return hit;
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Ericson, Real-Time Collision Detection, 5.1.5.
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace rodjoint
