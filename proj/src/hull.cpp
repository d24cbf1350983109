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

#include "rodjoint/hull.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "exact.hpp"

namespace rodjoint {

namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

// Lexicographic order on coordinates; makes insertion order independent
// of input order up to duplicates.
bool lex_less(const Vec3& a, const Vec3& b) {
  return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
}

// Incremental construction with exact orientation tests on sorted, distinct
// points. A point only removes faces it sees strictly, so every new face is
// non-degenerate; a point inserted early may end up inside a flat facet.
TriMesh incremental_hull(const std::vector<Vec3>& pts) {

  // Initial tetrahedron: first point, first point distinct, first point off
  // the line, first point off the plane.
  const std::size_t i0 = 0, i1 = 1;
  std::size_t i2 = pts.size(), i3 = pts.size();
  for (std::size_t i = 2; i < pts.size() && i2 == pts.size(); ++i) {
    for (int u = 0; u < 3; ++u) {
      if (exact::orient2d(pts[i0], pts[i1], pts[i], u, (u + 1) % 3) != 0) {
        i2 = i;
        break;
      }
    }
  }
  if (i2 == pts.size()) throw Error(ErrorCode::kDegenerateHull, "points are collinear");
  for (std::size_t i = 2; i < pts.size(); ++i) {
    if (i != i2 && exact::orient3d(pts[i0], pts[i1], pts[i2], pts[i]) != 0) {
      i3 = i;
      break;
    }
  }
  if (i3 == pts.size()) throw Error(ErrorCode::kDegenerateHull, "points are coplanar");

  std::vector<Face> faces;
  std::vector<char> alive;
  auto u32 = [](std::size_t i) { return static_cast<std::uint32_t>(i); };
  if (exact::orient3d(pts[i0], pts[i1], pts[i2], pts[i3]) > 0) {
    faces = {{u32(i0), u32(i2), u32(i1)}, {u32(i0), u32(i1), u32(i3)}, {u32(i1), u32(i2), u32(i3)},
             {u32(i2), u32(i0), u32(i3)}};
  } else {
    faces = {{u32(i0), u32(i1), u32(i2)}, {u32(i0), u32(i3), u32(i1)}, {u32(i1), u32(i3), u32(i2)},
             {u32(i2), u32(i3), u32(i0)}};
  }
  alive.assign(4, 1);

  std::unordered_map<std::uint64_t, std::uint32_t> owner;  // directed edge -> face
  for (std::uint32_t f = 0; f < faces.size(); ++f) {
    for (int k = 0; k < 3; ++k) owner[edge_key(faces[f][k], faces[f][(k + 1) % 3])] = f;
  }

  std::vector<char> visible;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    const Vec3& p = pts[i];
    visible.assign(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!alive[f]) continue;
      const Face& t = faces[f];
      if (exact::orient3d(pts[t[0]], pts[t[1]], pts[t[2]], p) > 0) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> horizon;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      for (int k = 0; k < 3; ++k) {
        const std::uint32_t a = faces[f][k], b = faces[f][(k + 1) % 3];
        if (!visible[owner.at(edge_key(b, a))]) horizon.emplace_back(a, b);
      }
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      alive[f] = 0;
      for (int k = 0; k < 3; ++k) owner.erase(edge_key(faces[f][k], faces[f][(k + 1) % 3]));
    }
    for (const auto& [a, b] : horizon) {
      const auto f = static_cast<std::uint32_t>(faces.size());
      faces.push_back({a, b, u32(i)});
      alive.push_back(1);
      owner[edge_key(a, b)] = f;
      owner[edge_key(b, u32(i))] = f;
      owner[edge_key(u32(i), a)] = f;
    }
  }

  TriMesh out;
  std::vector<std::uint32_t> remap(pts.size(), UINT32_MAX);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (!alive[f]) continue;
    Face nf;
    for (int k = 0; k < 3; ++k) {
      std::uint32_t& r = remap[faces[f][k]];
      if (r == UINT32_MAX) {
        r = u32(out.vertices.size());
        out.vertices.push_back(pts[faces[f][k]]);
      }
      nf[k] = r;
    }
    out.faces.push_back(nf);
  }
  return out;
}

// Corners of a convex polytope lie in at least three facet planes; points
// inside a facet or an edge lie in fewer.
std::vector<Vec3> corners(const TriMesh& hull) {
  std::vector<std::vector<std::uint32_t>> incident(hull.vertices.size());
  for (std::uint32_t f = 0; f < hull.faces.size(); ++f) {
    for (std::uint32_t v : hull.faces[f]) incident[v].push_back(f);
  }
  auto on_plane = [&](const Face& plane, const Face& f) {
    const auto& P = hull.vertices;
    for (std::uint32_t v : f) {
      if (exact::orient3d(P[plane[0]], P[plane[1]], P[plane[2]], P[v]) != 0) return false;
    }
    return true;
  };
  std::vector<Vec3> out;
  for (std::uint32_t v = 0; v < hull.vertices.size(); ++v) {
    std::vector<std::uint32_t> planes;
    for (std::uint32_t f : incident[v]) {
      const bool seen = std::any_of(planes.begin(), planes.end(),
                                    [&](std::uint32_t g) { return on_plane(hull.faces[g], hull.faces[f]); });
      if (!seen) planes.push_back(f);
      if (planes.size() == 3) break;
    }
    if (planes.size() == 3) out.push_back(hull.vertices[v]);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

}  // namespace

// A second pass over the corners alone removes points left inside facets;
// corners of the full set are never dropped, so it returns the same solid.
TriMesh convex_hull(std::span<const Vec3> input) {
  std::vector<Vec3> pts(input.begin(), input.end());
  for (const Vec3& p : pts) {
    if (!p.allFinite()) throw Error(ErrorCode::kDegenerateHull, "non-finite point");
  }
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 4) throw Error(ErrorCode::kDegenerateHull, "fewer than 4 distinct points");
  TriMesh hull = incremental_hull(pts);
  const std::vector<Vec3> kept = corners(hull);
  if (kept.size() < hull.vertices.size()) hull = incremental_hull(kept);
  return hull;
}

std::vector<Vec2> convex_hull_2d(std::span<const Vec2> input) {
  std::vector<Vec2> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto turn = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return exact::orient2d(Vec3(o.x(), o.y(), 0), Vec3(a.x(), a.y(), 0), Vec3(b.x(), b.y(), 0), 0, 1);
  };
  // Andrew's monotone chain.
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace rodjoint
