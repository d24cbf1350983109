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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rodjoint/mesh.hpp"

namespace rodjoint {

using Box3 = Eigen::AlignedBox3d;

/// Static bounding-volume hierarchy over a list of boxes (usually one per
/// triangle). Items are reported by their index in the input list.
class AabbTree {
 public:
  AabbTree() = default;
  explicit AabbTree(std::span<const Box3> boxes);
  static AabbTree of_faces(const TriMesh& mesh);

  bool empty() const { return nodes_.empty(); }
  const Box3& bounds() const { return nodes_.front().box; }

  /// Calls f(item) for every item whose box overlaps `box` (closed boxes).
  template <typename F>
  void query(const Box3& box, F&& f) const {
    if (nodes_.empty()) return;
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& n = nodes_[stack[--top]];
      if (!n.box.intersects(box)) continue;
      if (n.count > 0) {
        for (std::uint32_t i = 0; i < n.count; ++i) {
          const std::uint32_t item = items_[n.first + i];
          if (boxes_[item].intersects(box)) f(item);
        }
      } else {
        stack[top++] = n.first;
        stack[top++] = n.first + 1;
      }
    }
  }

  /// Calls f(item) for every item whose box is hit by the segment
  /// origin + t * dir, t in [0, tmax]. `f` returns true to stop early.
  template <typename F>
  void segment_query(const Vec3& origin, const Vec3& dir, double tmax, F&& f) const {
    if (nodes_.empty()) return;
    const Vec3 inv(1.0 / dir.x(), 1.0 / dir.y(), 1.0 / dir.z());
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& n = nodes_[stack[--top]];
      if (!slab_hit(n.box, origin, inv, tmax)) continue;
      if (n.count > 0) {
        for (std::uint32_t i = 0; i < n.count; ++i) {
          const std::uint32_t item = items_[n.first + i];
          if (slab_hit(boxes_[item], origin, inv, tmax) && f(item)) return;
        }
      } else {
        stack[top++] = n.first;
        stack[top++] = n.first + 1;
      }
    }
  }

  /// Calls f(a_item, b_item) for every overlapping pair between two trees.
  template <typename F>
  static void overlapping_pairs(const AabbTree& a, const AabbTree& b, F&& f) {
    if (a.nodes_.empty() || b.nodes_.empty()) return;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{0, 0}};
    while (!stack.empty()) {
      const auto [ia, ib] = stack.back();
      stack.pop_back();
      const Node& na = a.nodes_[ia];
      const Node& nb = b.nodes_[ib];
      if (!na.box.intersects(nb.box)) continue;
      if (na.count > 0 && nb.count > 0) {
        for (std::uint32_t i = 0; i < na.count; ++i) {
          const std::uint32_t x = a.items_[na.first + i];
          for (std::uint32_t j = 0; j < nb.count; ++j) {
            const std::uint32_t y = b.items_[nb.first + j];
            if (a.boxes_[x].intersects(b.boxes_[y])) f(x, y);
          }
        }
      } else if (nb.count > 0 || (na.count == 0 && na.box.volume() >= nb.box.volume())) {
        stack.emplace_back(na.first, ib);
        stack.emplace_back(na.first + 1, ib);
      } else {
        stack.emplace_back(ia, nb.first);
        stack.emplace_back(ia, nb.first + 1);
      }
    }
  }

 private:
  struct Node {
    Box3 box;
    std::uint32_t first = 0;  // child index (inner) or item offset (leaf)
    std::uint32_t count = 0;  // 0 for inner nodes
  };

  static bool slab_hit(const Box3& box, const Vec3& o, const Vec3& inv, double tmax);
  void build(std::uint32_t node, std::uint32_t begin, std::uint32_t end, int depth);

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> items_;
  std::vector<Box3> boxes_;
};

/// Exact test: do the two closed triangles share at least one point?
bool triangles_intersect(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b);

/// Winding number of a closed, outward-oriented mesh around `p`; 1 inside,
/// 0 outside. Points on the surface report 0. Robust near the surface.
int winding_number(const TriMesh& mesh, const AabbTree& tree, const Vec3& p);
bool point_in_mesh(const TriMesh& mesh, const Vec3& p);

/// True iff the two solids' surfaces intersect or one contains the other.
bool intersect_meshes(const TriMesh& a, const TriMesh& b);

struct RayHit {
  double t = 0.0;
  std::uint32_t face = 0;
};

/// Nearest hit of the ray origin + t * dir (t > tmin) with the mesh.
std::optional<RayHit> ray_cast(const TriMesh& mesh, const AabbTree& tree, const Vec3& origin, const Vec3& dir,
                               double tmin = 0.0);
/// Whether the ray hits the mesh at all (t > tmin).
bool ray_occluded(const TriMesh& mesh, const AabbTree& tree, const Vec3& origin, const Vec3& dir,
                  double tmin = 0.0);

/// Closest point on triangle (a, b, c) to p.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace rodjoint
