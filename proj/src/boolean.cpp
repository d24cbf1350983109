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

// N-ary mesh booleans on an exact arrangement.
//
// 1. Every pair of triangles from different operands is intersected
//    exactly; the pieces become constraint segments of both triangles.
// 2. Constraints within a triangle are split at their mutual crossings,
//    then each triangle is retriangulated with the constraints as edges.
// 3. Sub-triangles are grouped into patches bounded by constraint edges;
//    one representative point per patch decides, for every other operand,
//    inside / outside / on-surface.
// 4. A sub-triangle is kept when the predicate differs on its two sides.

#include "rodjoint/boolean.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "exact.hpp"
#include "rodjoint/intersect.hpp"
#include "tritri.hpp"
#include "winding.hpp"

namespace rodjoint {

namespace {

using exact::Q;
using exact::QPoint;
using exact::Tri;

using Seg = std::pair<std::uint32_t, std::uint32_t>;

std::uint64_t dkey(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }
std::uint64_t ukey(std::uint32_t a, std::uint32_t b) { return a < b ? dkey(a, b) : dkey(b, a); }

// Relative distance below which rounded output points are one vertex.
constexpr double kWeldTolerance = 1e-11;

// Faces closer than this (relative to the coordinate scale) and parallel
// within kParallelTolerance are treated as lying on each other. Inputs that
// were coplanar before a floating transform keep a film of rounding noise
// between them otherwise.
constexpr double kCoplanarTolerance = 1e-10;
constexpr double kParallelTolerance = 1e-9;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::kBooleanFailure, what); }

struct PointTable {
  std::vector<QPoint> pts;
  std::unordered_map<QPoint, std::uint32_t, exact::QPointHash> index;

  std::uint32_t add(const QPoint& p) {
    auto [it, inserted] = index.try_emplace(p, static_cast<std::uint32_t>(pts.size()));
    if (inserted) pts.push_back(p);
    return it->second;
  }
};

struct InputTri {
  std::uint32_t mesh = 0;
  std::array<std::uint32_t, 3> v{};
  Tri corners;
  int u = 0, w = 1;  // projection axes
  int orient = 1;    // sign of the projected corner orientation
  Vec3 unit_normal = Vec3::Zero();
  std::vector<Seg> segs;
  std::vector<std::uint32_t> points;
  std::vector<std::uint32_t> coplanar;  // partner triangles
};

// Order of points along a segment, by the coordinate where it varies most.
int varying_axis(const QPoint& a, const QPoint& b) {
  const Vec3 d = (b.approx - a.approx).cwiseAbs();
  int k = 0;
  d.maxCoeff(&k);
  if (a[k] == b[k]) {
    for (int i = 0; i < 3; ++i) {
      if (a[i] != b[i]) return i;
    }
  }
  return k;
}

void sort_unique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void normalize_segs(std::vector<Seg>& segs) {
  for (auto& [a, b] : segs) {
    if (a > b) std::swap(a, b);
  }
  std::sort(segs.begin(), segs.end());
  segs.erase(std::unique(segs.begin(), segs.end()), segs.end());
}

// Splits t's constraints at crossings and at constraint points lying on
// them, so that afterwards constraints meet only at shared endpoints.
void split_constraints(InputTri& t, PointTable& table) {
  normalize_segs(t.segs);
  for (const auto& [a, b] : t.segs) {
    t.points.push_back(a);
    t.points.push_back(b);
  }
  sort_unique(t.points);
  if (t.segs.empty()) return;

  std::vector<QPoint> crossings;
  {
    const auto& P = table.pts;
    auto o = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
      return exact::orient2d(P[a], P[b], P[c], t.u, t.w);
    };
    for (std::size_t i = 0; i < t.segs.size(); ++i) {
      const auto [a, b] = t.segs[i];
      for (std::size_t j = i + 1; j < t.segs.size(); ++j) {
        const auto [c, d] = t.segs[j];
        if (a == c || a == d || b == c || b == d) continue;
        if (o(a, b, c) * o(a, b, d) >= 0) continue;
        if (o(c, d, a) * o(c, d, b) >= 0) continue;
        const Q fa = exact::orient2d_value(P[c], P[d], P[a], t.u, t.w);
        const Q fb = exact::orient2d_value(P[c], P[d], P[b], t.u, t.w);
        crossings.push_back(exact::lerp(P[a], P[b], Q(fa / (fa - fb))));
      }
    }
  }
  for (const QPoint& x : crossings) t.points.push_back(table.add(x));
  sort_unique(t.points);

  const auto& P = table.pts;
  std::vector<Seg> out;
  std::vector<std::uint32_t> inner;
  for (const auto& [a, b] : t.segs) {
    inner.clear();
    for (std::uint32_t p : t.points) {
      if (p == a || p == b) continue;
      if (exact::orient2d(P[a], P[b], P[p], t.u, t.w) != 0) continue;
      if (exact::strictly_between(P[a], P[b], P[p])) inner.push_back(p);
    }
    if (inner.empty()) {
      out.emplace_back(a, b);
      continue;
    }
    const int k = varying_axis(P[a], P[b]);
    const bool up = P[a][k] < P[b][k];
    std::sort(inner.begin(), inner.end(), [&](std::uint32_t x, std::uint32_t y) {
      return up ? P[x][k] < P[y][k] : P[y][k] < P[x][k];
    });
    std::uint32_t prev = a;
    for (std::uint32_t p : inner) {
      out.emplace_back(prev, p);
      prev = p;
    }
    out.emplace_back(prev, b);
  }
  t.segs = std::move(out);
  normalize_segs(t.segs);
}

// Constrained triangulation of one input triangle in its projection plane.
// Triangles are kept counter-clockwise in the projection.
class LocalTriangulation {
 public:
  LocalTriangulation(const std::vector<QPoint>& pts, const InputTri& t) : P_(pts), u_(t.u), w_(t.w) {
    verts_ = {t.v[0], t.v[1], t.v[2]};
    if (t.orient > 0) {
      tris_.push_back({t.v[0], t.v[1], t.v[2]});
    } else {
      tris_.push_back({t.v[0], t.v[2], t.v[1]});
    }
  }

  void insert(std::uint32_t p) {
    if (std::find(verts_.begin(), verts_.end(), p) != verts_.end()) return;
    for (std::size_t ti = 0; ti < tris_.size(); ++ti) {
      const auto [a, b, c] = tris_[ti];
      const int o1 = o(a, b, p), o2 = o(b, c, p), o3 = o(c, a, p);
      if (o1 < 0 || o2 < 0 || o3 < 0) continue;
      verts_.push_back(p);
      if (o1 > 0 && o2 > 0 && o3 > 0) {
        tris_[ti] = {a, b, p};
        tris_.push_back({b, c, p});
        tris_.push_back({c, a, p});
        return;
      }
      // On an edge: rotate so that the edge is (x, y).
      std::uint32_t x, y, z;
      if (o1 == 0) {
        x = a, y = b, z = c;
      } else if (o2 == 0) {
        x = b, y = c, z = a;
      } else {
        x = c, y = a, z = b;
      }
      tris_[ti] = {x, p, z};
      tris_.push_back({p, y, z});
      if (auto other = find_directed(y, x)) {
        const std::uint32_t d = third(*other, y, x);
        tris_[*other] = {y, p, d};
        tris_.push_back({p, x, d});
      }
      return;
    }
    fail("constraint point outside its triangle");
  }

  void enforce(std::uint32_t a, std::uint32_t b, std::unordered_set<std::uint64_t>& barrier) {
    if (a == b) return;
    std::vector<std::uint32_t> inner;
    for (std::uint32_t v : verts_) {
      if (v == a || v == b || o(a, b, v) != 0) continue;
      if (exact::strictly_between(P_[a], P_[b], P_[v])) inner.push_back(v);
    }
    if (!inner.empty()) {
      const int k = varying_axis(P_[a], P_[b]);
      const bool up = P_[a][k] < P_[b][k];
      std::sort(inner.begin(), inner.end(), [&](std::uint32_t x, std::uint32_t y) {
        return up ? P_[x][k] < P_[y][k] : P_[y][k] < P_[x][k];
      });
      std::uint32_t prev = a;
      for (std::uint32_t v : inner) {
        enforce(prev, v, barrier);
        prev = v;
      }
      enforce(prev, b, barrier);
      return;
    }
    barrier.insert(ukey(a, b));
    if (find_directed(a, b) || find_directed(b, a)) return;

    auto crosses = [&](std::uint32_t x, std::uint32_t y) {
      if (x == a || x == b || y == a || y == b) return false;
      return o(a, b, x) * o(a, b, y) < 0 && o(x, y, a) * o(x, y, b) < 0;
    };
    std::deque<Seg> queue;
    std::unordered_set<std::uint64_t> seen;
    for (const auto& t : tris_) {
      for (int k = 0; k < 3; ++k) {
        const std::uint32_t x = t[k], y = t[(k + 1) % 3];
        if (crosses(x, y) && seen.insert(ukey(x, y)).second) queue.emplace_back(x, y);
      }
    }
    std::size_t guard = 0;
    const std::size_t limit = 64 * (tris_.size() + 16) * (queue.size() + 1);
    while (!queue.empty()) {
      if (++guard > limit) fail("constraint recovery did not converge");
      const auto [x, y] = queue.front();
      queue.pop_front();
      const auto t1 = find_directed(x, y);
      const auto t2 = find_directed(y, x);
      if (!t1 || !t2) fail("constraint crosses the triangle boundary");
      const std::uint32_t z = third(*t1, x, y);
      const std::uint32_t w = third(*t2, y, x);
      if (o(z, w, x) * o(z, w, y) < 0) {
        tris_[*t1] = {x, w, z};
        tris_[*t2] = {w, y, z};
        if (crosses(z, w)) queue.emplace_back(z, w);
      } else {
        queue.emplace_back(x, y);
      }
    }
    if (!find_directed(a, b) && !find_directed(b, a)) fail("constraint edge missing after recovery");
  }

  const std::vector<std::array<std::uint32_t, 3>>& triangles() const { return tris_; }

 private:
  int o(std::uint32_t a, std::uint32_t b, std::uint32_t c) const {
    return exact::orient2d(P_[a], P_[b], P_[c], u_, w_);
  }

  std::optional<std::size_t> find_directed(std::uint32_t x, std::uint32_t y) const {
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      const auto& t = tris_[i];
      for (int k = 0; k < 3; ++k) {
        if (t[k] == x && t[(k + 1) % 3] == y) return i;
      }
    }
    return std::nullopt;
  }

  std::uint32_t third(std::size_t ti, std::uint32_t x, std::uint32_t y) const {
    for (std::uint32_t v : tris_[ti]) {
      if (v != x && v != y) return v;
    }
    fail("degenerate local triangle");
  }

  const std::vector<QPoint>& P_;
  int u_, w_;
  std::vector<std::uint32_t> verts_;
  std::vector<std::array<std::uint32_t, 3>> tris_;
};

struct SubTri {
  std::uint32_t src;
  std::array<std::uint32_t, 3> v;
};

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Where a patch lies relative to another operand.
enum class Side : char { kOutside, kInside, kOnSame, kOnOpposite };

// Splits faces at vertices lying inside their edges until every directed
// edge has a reverse partner (or nothing more can be split).
void repair_t_junctions(std::vector<std::array<std::uint32_t, 3>>& faces, const std::vector<QPoint>& P) {
  for (int iter = 0; iter < 16; ++iter) {
    std::unordered_map<std::uint64_t, int> count;
    for (const auto& f : faces) {
      for (int k = 0; k < 3; ++k) ++count[dkey(f[k], f[(k + 1) % 3])];
    }
    std::vector<std::uint32_t> used;
    for (const auto& f : faces) used.insert(used.end(), f.begin(), f.end());
    sort_unique(used);

    bool changed = false;
    std::vector<std::array<std::uint32_t, 3>> out;
    out.reserve(faces.size());
    for (const auto& f : faces) {
      bool split = false;
      for (int k = 0; k < 3 && !split; ++k) {
        const std::uint32_t a = f[k], b = f[(k + 1) % 3], c = f[(k + 2) % 3];
        if (count.count(dkey(b, a))) continue;
        Box3 box(P[a].approx);
        box.extend(P[b].approx);
        const double pad = 1e-9 * (box.diagonal().norm() + box.max().cwiseAbs().maxCoeff() + 1.0);
        box.min().array() -= pad;
        box.max().array() += pad;
        std::vector<std::uint32_t> inner;
        for (std::uint32_t p : used) {
          if (p == a || p == b || p == c || !box.contains(P[p].approx)) continue;
          if (exact::collinear(P[a], P[b], P[p]) && exact::strictly_between(P[a], P[b], P[p])) inner.push_back(p);
        }
        if (inner.empty()) continue;
        const int ax = varying_axis(P[a], P[b]);
        const bool up = P[a][ax] < P[b][ax];
        std::sort(inner.begin(), inner.end(), [&](std::uint32_t x, std::uint32_t y) {
          return up ? P[x][ax] < P[y][ax] : P[y][ax] < P[x][ax];
        });
        std::uint32_t prev = a;
        for (std::uint32_t p : inner) {
          out.push_back({prev, p, c});
          prev = p;
        }
        out.push_back({prev, b, c});
        split = true;
      }
      if (split) {
        changed = true;
      } else {
        out.push_back(f);
      }
    }
    faces = std::move(out);
    if (!changed) return;
  }
}

// Whether two triangles of different operands lie on one plane up to
// rounding noise. Exactly coplanar pairs also qualify.
bool near_coplanar(const InputTri& t, const InputTri& u, double tol) {
  if (t.unit_normal.cross(u.unit_normal).norm() > kParallelTolerance) return false;
  for (const Vec3& p : u.corners) {
    if (std::abs(t.unit_normal.dot(p - t.corners[0])) > tol) return false;
  }
  for (const Vec3& p : t.corners) {
    if (std::abs(u.unit_normal.dot(p - u.corners[0])) > tol) return false;
  }
  return true;
}

// Adds to t the coplanar overlap with u after lifting u onto t's plane
// along t's projection axis: u's edges clipped to t and t's edges clipped
// to u. Every new point lies exactly on t.
void add_lifted_overlap(InputTri& t, const InputTri& u, PointTable& table) {
  const int k = 3 - t.u - t.w;
  const auto nrm = exact::normal(t.corners[0], t.corners[1], t.corners[2]);
  auto lift = [&](const Vec3& p) {
    QPoint q(p);
    q.c[k] = Q(t.corners[0][k]) - (nrm[t.u] * (q.c[t.u] - Q(t.corners[0][t.u])) +
                                   nrm[t.w] * (q.c[t.w] - Q(t.corners[0][t.w]))) / nrm[k];
    q.refresh();
    return q;
  };
  const QPoint lifted[3] = {lift(u.corners[0]), lift(u.corners[1]), lift(u.corners[2])};
  auto add = [&](const std::optional<exact::QSegment>& s) {
    if (!s) return;
    const std::uint32_t a = table.add(s->a);
    const std::uint32_t b = table.add(s->b);
    if (a == b) {
      t.points.push_back(a);
    } else {
      t.segs.emplace_back(a, b);
    }
  };
  for (int i = 0; i < 3; ++i) {
    add(exact::clip_to_triangle(lifted[i], lifted[(i + 1) % 3], t.corners, t.u, t.w));
    add(exact::clip_to_triangle(QPoint(t.corners[i]), QPoint(t.corners[(i + 1) % 3]), u.corners, t.u, t.w));
  }
}

// A regular set has no two-sided sheets: a face and its reverse on the same
// three vertices are a collapsed sliver and cancel.
bool cancel_opposite_faces(TriMesh& mesh) {
  auto canonical = [](const Face& f) {
    const int k = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
    return Face{f[k], f[(k + 1) % 3], f[(k + 2) % 3]};
  };
  std::map<Face, std::vector<std::size_t>> by_key;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) by_key[canonical(mesh.faces[i])].push_back(i);
  std::vector<char> drop(mesh.faces.size(), 0);
  bool changed = false;
  for (auto& [key, list] : by_key) {
    const auto rev = by_key.find(Face{key[0], key[2], key[1]});
    if (rev == by_key.end()) continue;
    while (!list.empty() && !rev->second.empty()) {
      drop[list.back()] = drop[rev->second.back()] = 1;
      list.pop_back();
      rev->second.pop_back();
      changed = true;
    }
  }
  if (!changed) return false;
  std::vector<Face> kept;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    if (!drop[i]) kept.push_back(mesh.faces[i]);
  }
  mesh.faces = std::move(kept);
  return true;
}

// Whether the vertex opposite the longest edge lies within `tol` of it;
// `longest` receives the corner where that edge starts.
bool is_flat(const TriMesh& mesh, const Face& f, double tol, int* longest = nullptr) {
  int k = 0;
  double len2 = -1;
  for (int e = 0; e < 3; ++e) {
    const double l = (mesh.vertices[f[(e + 1) % 3]] - mesh.vertices[f[e]]).squaredNorm();
    if (l > len2) len2 = l, k = e;
  }
  if (longest) *longest = k;
  const Vec3& a = mesh.vertices[f[k]];
  const Vec3 d = mesh.vertices[f[(k + 1) % 3]] - a;
  return len2 == 0 || d.cross(mesh.vertices[f[(k + 2) % 3]] - a).norm() <= tol * std::sqrt(len2);
}

// Splits non-flat faces at vertices within `tol` of an edge that is used
// more often than its reverse. Rounding leaves such T-junctions where two
// exact points were closer than double resolution.
bool split_open_edges(TriMesh& mesh, double tol) {
  std::unordered_map<std::uint64_t, int> count;
  for (const Face& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) ++count[dkey(f[k], f[(k + 1) % 3])];
  }
  auto uses = [&](std::uint32_t a, std::uint32_t b) {
    const auto it = count.find(dkey(a, b));
    return it == count.end() ? 0 : it->second;
  };
  std::vector<std::uint32_t> used;
  for (const Face& f : mesh.faces) used.insert(used.end(), f.begin(), f.end());
  sort_unique(used);
  bool changed = false;
  std::vector<Face> out;
  out.reserve(mesh.faces.size());
  for (const Face& f : mesh.faces) {
    bool split = false;
    for (int k = 0; k < 3 && !split; ++k) {
      const std::uint32_t a = f[k], b = f[(k + 1) % 3], c = f[(k + 2) % 3];
      if (uses(a, b) == uses(b, a) || is_flat(mesh, f, tol)) continue;
      const Vec3 pa = mesh.vertices[a], d = mesh.vertices[b] - pa;
      const double len2 = d.squaredNorm();
      std::vector<std::pair<double, std::uint32_t>> inner;
      for (std::uint32_t p : used) {
        if (p == a || p == b || p == c) continue;
        const Vec3 q = mesh.vertices[p] - pa;
        const double s = q.dot(d) / len2;
        if (s <= 0 || s >= 1 || (q - s * d).norm() > tol) continue;
        inner.emplace_back(s, p);
      }
      if (inner.empty()) continue;
      std::sort(inner.begin(), inner.end());
      std::uint32_t prev = a;
      for (const auto& [s, p] : inner) {
        out.push_back({prev, p, c});
        prev = p;
      }
      out.push_back({prev, b, c});
      split = true;
    }
    if (split) {
      changed = true;
    } else {
      out.push_back(f);
    }
  }
  mesh.faces = std::move(out);
  return changed;
}

// Removes flat faces. The neighbor across the long edge is split at the
// middle vertex; without a neighbor the face is its own split and goes.
bool remove_flat_faces(TriMesh& mesh, double tol) {
  std::unordered_map<std::uint64_t, std::size_t> owner;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const Face& f = mesh.faces[i];
    for (int k = 0; k < 3; ++k) owner.emplace(dkey(f[k], f[(k + 1) % 3]), i);
  }
  std::vector<char> touched(mesh.faces.size(), 0);
  std::vector<Face> added;
  bool changed = false;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    if (touched[i]) continue;
    const Face& f = mesh.faces[i];
    int k = 0;
    if (!is_flat(mesh, f, tol, &k)) continue;
    const std::uint32_t a = f[k], b = f[(k + 1) % 3], c = f[(k + 2) % 3];
    const auto it = owner.find(dkey(b, a));
    if (it == owner.end()) {
      touched[i] = 1;
      changed = true;
      continue;
    }
    if (it->second == i || touched[it->second]) continue;
    const Face& g = mesh.faces[it->second];
    std::uint32_t e = g[0];
    for (std::uint32_t v : g) {
      if (v != a && v != b) e = v;
    }
    touched[i] = touched[it->second] = 1;
    changed = true;
    if (e != c) {
      added.push_back({b, c, e});
      added.push_back({c, a, e});
    }
  }
  if (!changed) return false;
  std::vector<Face> out;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    if (!touched[i]) out.push_back(mesh.faces[i]);
  }
  out.insert(out.end(), added.begin(), added.end());
  mesh.faces = std::move(out);
  return true;
}

// Repairs what rounding the exact result did to its topology.
void close_rounded(TriMesh& mesh, double tol) {
  mesh = weld_vertices(mesh, tol);
  for (int iter = 0; iter < 64; ++iter) {
    bool changed = cancel_opposite_faces(mesh);
    changed = remove_flat_faces(mesh, tol) || changed;
    changed = split_open_edges(mesh, tol) || changed;
    if (!changed) break;
  }
  mesh = weld_vertices(mesh, 0.0);
}

// Regions of a regular set may touch along an edge or at a vertex. Faces
// around such an edge are paired by angle, each with the neighbor that
// bounds the same solid wedge, and every vertex gets one copy per fan.
void split_nonmanifold(TriMesh& mesh) {
  const std::size_t nf = mesh.faces.size();
  // Half-edge 3f+k runs from faces[f][k] to faces[f][k+1].
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> around;
  for (std::uint32_t f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      const Face& g = mesh.faces[f];
      around[ukey(g[k], g[(k + 1) % 3])].push_back(3 * f + k);
    }
  }
  auto from = [&](std::uint32_t h) { return mesh.faces[h / 3][h % 3]; };
  auto opposite = [&](std::uint32_t h) { return mesh.faces[h / 3][(h % 3 + 2) % 3]; };

  std::vector<std::uint32_t> twin(3 * nf, std::numeric_limits<std::uint32_t>::max());
  for (auto& [key, hs] : around) {
    if (hs.size() == 2) {
      twin[hs[0]] = hs[1];
      twin[hs[1]] = hs[0];
      continue;
    }
    const std::uint32_t a = static_cast<std::uint32_t>(key >> 32);
    const Vec3 pa = mesh.vertices[a];
    const Vec3 axis = (mesh.vertices[static_cast<std::uint32_t>(key & 0xffffffffu)] - pa).normalized();
    const Vec3 e1 = axis.unitOrthogonal(), e2 = axis.cross(e1);
    std::vector<std::pair<double, std::uint32_t>> order;
    for (std::uint32_t h : hs) {
      const Vec3 v = mesh.vertices[opposite(h)] - pa;
      order.emplace_back(std::atan2(v.dot(e2), v.dot(e1)), h);
    }
    std::sort(order.begin(), order.end());
    // Seen along the axis from a, the solid behind a half-edge leaving a
    // lies clockwise of it.
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::uint32_t h = order[i].second;
      if (from(h) != a) continue;
      const std::uint32_t g = order[(i + order.size() - 1) % order.size()].second;
      if (from(g) == a) continue;
      twin[h] = g;
      twin[g] = h;
    }
  }

  // Corner 3f+k sits at faces[f][k]; corners joined across twins form fans.
  UnionFind fans(3 * nf);
  for (std::uint32_t h = 0; h < 3 * nf; ++h) {
    const std::uint32_t g = twin[h];
    if (g == std::numeric_limits<std::uint32_t>::max()) continue;
    const std::uint32_t f = h / 3, k = h % 3, e = g / 3, m = g % 3;
    fans.unite(3 * f + k, 3 * e + (m + 1) % 3);
    fans.unite(3 * f + (k + 1) % 3, 3 * e + m);
  }
  std::vector<std::uint32_t> copy_of(3 * nf, std::numeric_limits<std::uint32_t>::max());
  std::vector<char> claimed(mesh.vertices.size(), 0);
  for (std::uint32_t c = 0; c < 3 * nf; ++c) {
    const std::uint32_t root = fans.find(c);
    if (copy_of[root] == std::numeric_limits<std::uint32_t>::max()) {
      const std::uint32_t v = mesh.faces[c / 3][c % 3];
      if (!claimed[v]) {
        claimed[v] = 1;
        copy_of[root] = v;
      } else {
        copy_of[root] = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back(mesh.vertices[v]);
      }
    }
  }
  for (std::uint32_t c = 0; c < 3 * nf; ++c) mesh.faces[c / 3][c % 3] = copy_of[fans.find(c)];
}

}  // namespace

TriMesh csg(std::span<const TriMesh> operands, const std::function<bool(const InsideFlags&)>& inside) {
  const std::size_t n = operands.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!operands[i].empty() && !is_solid(operands[i])) {
      throw Error(ErrorCode::kNotSolid, "boolean operand " + std::to_string(i) + " is not a closed solid");
    }
  }

  // Input triangles on a shared exact point table.
  PointTable table;
  std::vector<InputTri> tris;
  std::vector<AabbTree> trees(n);
  std::vector<Box3> boxes;
  double scale = 1.0;
  for (std::size_t m = 0; m < n; ++m) {
    const TriMesh& mesh = operands[m];
    trees[m] = AabbTree::of_faces(mesh);
    for (const Vec3& v : mesh.vertices) scale = std::max(scale, v.cwiseAbs().maxCoeff());
    std::vector<std::uint32_t> ids(mesh.vertices.size());
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) ids[v] = table.add(QPoint(mesh.vertices[v]));
    for (const Face& f : mesh.faces) {
      InputTri t;
      t.mesh = static_cast<std::uint32_t>(m);
      t.v = {ids[f[0]], ids[f[1]], ids[f[2]]};
      t.corners = {mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]};
      const auto nrm = exact::normal(t.corners[0], t.corners[1], t.corners[2]);
      if (sgn(nrm[0]) == 0 && sgn(nrm[1]) == 0 && sgn(nrm[2]) == 0) fail("degenerate input face");
      const int k = exact::dominant_axis(nrm);
      t.u = (k + 1) % 3;
      t.w = (k + 2) % 3;
      t.orient = exact::orient2d(t.corners[0], t.corners[1], t.corners[2], t.u, t.w);
      t.unit_normal = (t.corners[1] - t.corners[0]).cross(t.corners[2] - t.corners[0]).normalized();
      Box3 b(t.corners[0]);
      b.extend(t.corners[1]);
      b.extend(t.corners[2]);
      boxes.push_back(b);
      tris.push_back(std::move(t));
    }
  }
  if (tris.empty()) return {};

  // Exact pairwise intersections between operands.
  const double tol = kCoplanarTolerance * scale;
  const AabbTree all(boxes);
  for (std::uint32_t ti = 0; ti < tris.size(); ++ti) {
    Box3 query = boxes[ti];
    query.min().array() -= tol;
    query.max().array() += tol;
    all.query(query, [&](std::uint32_t ui) {
      if (ui <= ti || tris[ui].mesh == tris[ti].mesh) return;
      const auto r = exact::intersect_triangles(tris[ti].corners, tris[ui].corners);
      if (!r.coplanar && near_coplanar(tris[ti], tris[ui], tol)) {
        add_lifted_overlap(tris[ti], tris[ui], table);
        add_lifted_overlap(tris[ui], tris[ti], table);
        tris[ti].coplanar.push_back(ui);
        tris[ui].coplanar.push_back(ti);
        return;
      }
      if (r.empty()) return;
      for (const auto& s : r.segments) {
        const std::uint32_t a = table.add(s.a);
        const std::uint32_t b = table.add(s.b);
        if (a == b) {
          tris[ti].points.push_back(a);
          tris[ui].points.push_back(a);
        } else {
          tris[ti].segs.emplace_back(a, b);
          tris[ui].segs.emplace_back(a, b);
        }
      }
      if (r.coplanar) {
        tris[ti].coplanar.push_back(ui);
        tris[ui].coplanar.push_back(ti);
      }
    });
  }

  for (auto& t : tris) split_constraints(t, table);

  // Directed edge -> triangle, per operand, to share edge points.
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> edge_owner(n);
  for (std::uint32_t ti = 0; ti < tris.size(); ++ti) {
    const auto& t = tris[ti];
    for (int k = 0; k < 3; ++k) edge_owner[t.mesh][dkey(t.v[k], t.v[(k + 1) % 3])] = ti;
  }

  // Retriangulate.
  std::vector<SubTri> subs;
  std::unordered_set<std::uint64_t> barrier;
  const auto& P = table.pts;
  for (std::uint32_t ti = 0; ti < tris.size(); ++ti) {
    const InputTri& t = tris[ti];
    std::vector<std::uint32_t> extra;
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = t.v[k], b = t.v[(k + 1) % 3];
      const auto it = edge_owner[t.mesh].find(dkey(b, a));
      if (it == edge_owner[t.mesh].end()) fail("operand is not closed");
      for (std::uint32_t p : tris[it->second].points) {
        if (p == a || p == b) continue;
        if (exact::collinear(P[a], P[b], P[p]) && exact::strictly_between(P[a], P[b], P[p])) extra.push_back(p);
      }
    }
    if (t.points.empty() && extra.empty()) {
      subs.push_back({ti, t.v});
      continue;
    }
    LocalTriangulation lt(P, t);
    for (std::uint32_t p : t.points) lt.insert(p);
    for (std::uint32_t p : extra) lt.insert(p);
    for (const auto& [a, b] : t.segs) lt.enforce(a, b, barrier);
    for (auto tri : lt.triangles()) {
      if (t.orient < 0) std::swap(tri[1], tri[2]);
      subs.push_back({ti, tri});
    }
  }

  // Patches: connected sub-triangles of one operand, not crossing
  // constraint edges.
  UnionFind uf(subs.size());
  {
    std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> first(n);
    for (std::uint32_t s = 0; s < subs.size(); ++s) {
      const auto& sv = subs[s].v;
      const std::uint32_t m = tris[subs[s].src].mesh;
      for (int k = 0; k < 3; ++k) {
        const std::uint64_t key = ukey(sv[k], sv[(k + 1) % 3]);
        if (barrier.count(key)) continue;
        auto [it, inserted] = first[m].try_emplace(key, s);
        if (!inserted) uf.unite(it->second, s);
      }
    }
  }
  std::map<std::uint32_t, std::uint32_t> representative;  // root -> largest sub-triangle
  std::vector<double> area(subs.size());
  for (std::uint32_t s = 0; s < subs.size(); ++s) {
    const auto& sv = subs[s].v;
    area[s] = (P[sv[1]].approx - P[sv[0]].approx).cross(P[sv[2]].approx - P[sv[0]].approx).norm();
    const std::uint32_t root = uf.find(s);
    auto [it, inserted] = representative.try_emplace(root, s);
    if (!inserted && area[s] > area[it->second]) it->second = s;
  }

  // Classification of each patch against every other operand.
  struct PatchState {
    bool keep = false;
    bool flip = false;
  };
  std::map<std::uint32_t, PatchState> state;
  for (const auto& [root, s] : representative) {
    const InputTri& t = tris[subs[s].src];
    const auto& sv = subs[s].v;
    const QPoint c(Q(P[sv[0]][0] + P[sv[1]][0] + P[sv[2]][0]) / 3, Q(P[sv[0]][1] + P[sv[1]][1] + P[sv[2]][1]) / 3,
                   Q(P[sv[0]][2] + P[sv[1]][2] + P[sv[2]][2]) / 3);
    std::vector<Side> side(n, Side::kOutside);
    for (std::uint32_t ui : t.coplanar) {
      const InputTri& u = tris[ui];
      if (side[u.mesh] != Side::kOutside) continue;
      if (!exact::in_closed_triangle(c, u.corners, t.u, t.w)) continue;
      const auto na = exact::normal(t.corners[0], t.corners[1], t.corners[2]);
      const auto nb = exact::normal(u.corners[0], u.corners[1], u.corners[2]);
      const Q dot = na[0] * nb[0] + na[1] * nb[1] + na[2] * nb[2];
      side[u.mesh] = sgn(dot) > 0 ? Side::kOnSame : Side::kOnOpposite;
    }
    bool lowest = true;
    InsideFlags behind(n, 0), front(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == t.mesh) {
        behind[j] = 1;
        continue;
      }
      if (side[j] == Side::kOutside && !operands[j].empty() &&
          exact::winding_number(operands[j], trees[j], c) != 0) {
        side[j] = Side::kInside;
      }
      switch (side[j]) {
        case Side::kOutside:
          break;
        case Side::kInside:
          behind[j] = front[j] = 1;
          break;
        case Side::kOnSame:
          behind[j] = 1;
          if (j < t.mesh) lowest = false;
          break;
        case Side::kOnOpposite:
          front[j] = 1;
          if (j < t.mesh) lowest = false;
          break;
      }
    }
    const bool b = inside(behind), f = inside(front);
    state[root] = {b != f && lowest, f};
  }

  std::vector<std::array<std::uint32_t, 3>> faces;
  for (std::uint32_t s = 0; s < subs.size(); ++s) {
    const PatchState& ps = state[uf.find(s)];
    if (!ps.keep) continue;
    auto f = subs[s].v;
    if (ps.flip) std::swap(f[1], f[2]);
    faces.push_back(f);
  }
  if (faces.empty()) return {};
  repair_t_junctions(faces, P);

  // Round to doubles once; points that collapse together are merged.
  TriMesh out;
  std::unordered_map<std::uint32_t, std::uint32_t> by_id;
  std::map<std::array<double, 3>, std::uint32_t> by_coord;
  auto vertex = [&](std::uint32_t id) {
    if (auto it = by_id.find(id); it != by_id.end()) return it->second;
    const Vec3& p = P[id].approx;
    auto [it, inserted] = by_coord.try_emplace({p.x(), p.y(), p.z()}, static_cast<std::uint32_t>(out.vertices.size()));
    if (inserted) out.vertices.push_back(p);
    by_id.emplace(id, it->second);
    return it->second;
  };
  for (const auto& f : faces) {
    const Face g{vertex(f[0]), vertex(f[1]), vertex(f[2])};
    if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) continue;
    out.faces.push_back(g);
  }
  if (out.faces.empty()) return {};
  // Exact points that differ only below double resolution leave slivers
  // after rounding; weld them relative to the coordinate scale.
  for (const Vec3& v : out.vertices) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  close_rounded(out, kWeldTolerance * scale);
  if (out.faces.empty()) return {};
  split_nonmanifold(out);
  const SolidityReport report = check_solidity(out);
  if (!report.solid()) {
    if (report.closed && report.consistently_oriented && std::abs(report.signed_volume) < kEmptyVolume) return {};
    fail(std::string("result is not solid (") + (report.closed ? "" : "open ") +
         (report.consistently_oriented ? "" : "misoriented ") + "volume " + std::to_string(report.signed_volume) +
         ")");
  }
  if (report.signed_volume < kEmptyVolume) return {};
  return out;
}

TriMesh boolean(BooleanOp op, const TriMesh& a, const TriMesh& b) {
  const std::array<TriMesh, 2> ops{a, b};
  switch (op) {
    case BooleanOp::kUnion:
      return csg(ops, [](const InsideFlags& f) { return f[0] || f[1]; });
    case BooleanOp::kDifference:
      return csg(ops, [](const InsideFlags& f) { return f[0] && !f[1]; });
    case BooleanOp::kIntersection:
      return csg(ops, [](const InsideFlags& f) { return f[0] && f[1]; });
  }
  return {};
}

TriMesh union_minus(std::span<const TriMesh> added, std::span<const TriMesh> removed) {
  std::vector<TriMesh> ops(added.begin(), added.end());
  ops.insert(ops.end(), removed.begin(), removed.end());
  const std::size_t k = added.size();
  return csg(ops, [k](const InsideFlags& f) {
    bool in = false;
    for (std::size_t i = 0; i < k; ++i) in = in || f[i];
    if (!in) return false;
    for (std::size_t i = k; i < f.size(); ++i) {
      if (f[i]) return false;
    }
    return true;
  });
}

}  // namespace rodjoint
