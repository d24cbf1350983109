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

#include "rodjoint/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace rodjoint {

Vec3 TriMesh::face_normal(std::size_t f) const {
  const Face& t = faces[f];
  return (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
}

double TriMesh::face_area(std::size_t f) const { return 0.5 * face_normal(f).norm(); }

Eigen::AlignedBox3d TriMesh::bounds() const {
  Eigen::AlignedBox3d box;
  for (const Vec3& v : vertices) box.extend(v);
  return box;
}

TriMesh unit_prism(int sides) {
  if (sides < 3) throw Error(ErrorCode::kInvalidSides, "a prism needs at least 3 sides, got " + std::to_string(sides));
  const auto p = static_cast<std::uint32_t>(sides);
  TriMesh mesh;
  mesh.vertices.reserve(2 * p);
  const double phase = std::numbers::pi / sides;
  for (int z = 0; z < 2; ++z) {
    for (std::uint32_t k = 0; k < p; ++k) {
      const double a = phase + 2.0 * std::numbers::pi * k / sides;
      mesh.vertices.emplace_back(std::cos(a), std::sin(a), static_cast<double>(z));
    }
  }
  for (std::uint32_t k = 1; k + 1 < p; ++k) {
    mesh.faces.push_back({0, k + 1, k});
    mesh.faces.push_back({p, p + k, p + k + 1});
  }
  for (std::uint32_t k = 0; k < p; ++k) {
    const std::uint32_t k1 = (k + 1) % p;
    mesh.faces.push_back({k, k1, p + k1});
    mesh.faces.push_back({k, p + k1, p + k});
  }
  return mesh;
}

std::vector<std::uint32_t> prism_base_ring(int sides) {
  std::vector<std::uint32_t> ring(static_cast<std::size_t>(sides));
  std::iota(ring.begin(), ring.end(), 0u);
  return ring;
}

std::vector<std::uint32_t> prism_top_ring(int sides) {
  std::vector<std::uint32_t> ring(static_cast<std::size_t>(sides));
  std::iota(ring.begin(), ring.end(), static_cast<std::uint32_t>(sides));
  return ring;
}

TriMesh box_mesh(const Vec3& lo, const Vec3& hi) {
  TriMesh mesh;
  for (int i = 0; i < 8; ++i) {
    mesh.vertices.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(), (i & 4) ? hi.z() : lo.z());
  }
  // Vertex i has bit 0 = x, bit 1 = y, bit 2 = z.
  mesh.faces = {{0, 2, 3}, {0, 3, 1},   // z = lo
                {4, 5, 7}, {4, 7, 6},   // z = hi
                {0, 1, 5}, {0, 5, 4},   // y = lo
                {2, 6, 7}, {2, 7, 3},   // y = hi
                {0, 4, 6}, {0, 6, 2},   // x = lo
                {1, 3, 7}, {1, 7, 5}};  // x = hi
  return mesh;
}

Mat3 cross_matrix(const Vec3& x) {
  Mat3 m;
  m << 0, -x.z(), x.y(),
       x.z(), 0, -x.x(),
       -x.y(), x.x(), 0;
  return m;
}

Mat3 rotation_to(const Vec3& w) {
  const Vec3 k = Vec3::UnitZ().cross(w);
  const double c = w.z();
  const double k2 = k.squaredNorm();
  if (k2 == 0.0) {
    if (c > 0) return Mat3::Identity();
    return Vec3(1, -1, -1).asDiagonal();
  }
  const Mat3 kx = cross_matrix(k);
  // 1/(1+c) == (1-c)/|k|^2 for unit w; the second form keeps full precision
  // when w is close to -e_z.
  const double factor = c >= 0 ? 1.0 / (1.0 + c) : (1.0 - c) / k2;
  return Mat3::Identity() + kx + factor * (kx * kx);
}

TriMesh transform(const TriMesh& mesh, const Affine& a) {
  TriMesh out;
  out.vertices.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) out.vertices.push_back(a.apply(v));
  out.faces = mesh.faces;
  if (a.linear.determinant() < 0) {
    for (Face& f : out.faces) std::swap(f[1], f[2]);
  }
  return out;
}

SolidityReport check_solidity(const TriMesh& mesh) {
  SolidityReport report;
  const auto n = mesh.vertices.size();
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(mesh.faces.size() * 3);
  auto key = [](std::uint64_t a, std::uint64_t b) { return (a << 32) | b; };
  for (const Face& f : mesh.faces) {
    if (f[0] >= n || f[1] >= n || f[2] >= n) {
      report.indices_in_range = false;
      continue;
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) report.no_degenerate_faces = false;
    for (int i = 0; i < 3; ++i) ++directed[key(f[i], f[(i + 1) % 3])];
  }
  if (mesh.faces.empty()) report.closed = false;
  for (const auto& [k, count] : directed) {
    const std::uint64_t a = k >> 32, b = k & 0xffffffffu;
    const auto rev = directed.find(key(b, a));
    const int back = rev == directed.end() ? 0 : rev->second;
    if (count + back != 2) report.closed = false;
    if (count != 1 || back != 1) report.consistently_oriented = false;
  }
  if (report.indices_in_range) report.signed_volume = signed_volume(mesh);
  return report;
}

bool is_solid(const TriMesh& mesh) { return check_solidity(mesh).solid(); }

std::size_t component_count(const TriMesh& mesh) {
  std::vector<std::uint32_t> parent(mesh.vertices.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> used(mesh.vertices.size(), false);
  for (const Face& f : mesh.faces) {
    for (int i = 0; i < 3; ++i) {
      used[f[i]] = true;
      parent[find(f[i])] = find(f[(i + 1) % 3]);
    }
  }
  std::size_t count = 0;
  for (std::uint32_t v = 0; v < parent.size(); ++v) {
    if (used[v] && find(v) == v) ++count;
  }
  return count;
}

namespace {

// Integrates relative to a reference point to limit cancellation far from
// the origin.
struct VolumeIntegrals {
  double six_volume = 0.0;
  Vec3 first_moment = Vec3::Zero();  // times 24
};

VolumeIntegrals integrate(const TriMesh& mesh, const Vec3& ref) {
  VolumeIntegrals acc;
  for (const Face& f : mesh.faces) {
    const Vec3 a = mesh.vertices[f[0]] - ref;
    const Vec3 b = mesh.vertices[f[1]] - ref;
    const Vec3 c = mesh.vertices[f[2]] - ref;
    const double det = a.dot(b.cross(c));
    acc.six_volume += det;
    acc.first_moment += det * (a + b + c);
  }
  return acc;
}

Vec3 reference_point(const TriMesh& mesh) {
  return mesh.vertices.empty() ? Vec3(Vec3::Zero()) : Vec3(mesh.bounds().center());
}

}  // namespace

double signed_volume(const TriMesh& mesh) {
  return integrate(mesh, reference_point(mesh)).six_volume / 6.0;
}

MassProperties mass_properties(const TriMesh& mesh, double density) {
  const SolidityReport report = check_solidity(mesh);
  if (!report.solid()) throw Error(ErrorCode::kNotSolid, "mass properties need a closed, positively oriented mesh");
  const Vec3 ref = reference_point(mesh);
  const VolumeIntegrals acc = integrate(mesh, ref);
  MassProperties props;
  props.volume = acc.six_volume / 6.0;
  props.mass = props.volume * 1e-9 * density;
  props.center_of_mass = ref + acc.first_moment / (4.0 * acc.six_volume);
  return props;
}

TriMesh merge(std::span<const TriMesh> meshes) {
  TriMesh out;
  for (const TriMesh& m : meshes) {
    const auto base = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), m.vertices.begin(), m.vertices.end());
    for (const Face& f : m.faces) out.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
  }
  return out;
}

TriMesh weld_vertices(const TriMesh& mesh, double tol) {
  const auto n = static_cast<std::uint32_t>(mesh.vertices.size());
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto join = [&](std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  if (tol > 0) {
    using Cell = std::array<std::int64_t, 3>;
    auto cell_of = [&](const Vec3& p) {
      return Cell{static_cast<std::int64_t>(std::floor(p.x() / tol)), static_cast<std::int64_t>(std::floor(p.y() / tol)),
                  static_cast<std::int64_t>(std::floor(p.z() / tol))};
    };
    std::map<Cell, std::vector<std::uint32_t>> grid;
    for (std::uint32_t v = 0; v < n; ++v) {
      const Cell c = cell_of(mesh.vertices[v]);
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          for (std::int64_t dz = -1; dz <= 1; ++dz) {
            const auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
            if (it == grid.end()) continue;
            for (std::uint32_t u : it->second) {
              if ((mesh.vertices[u] - mesh.vertices[v]).norm() <= tol) join(u, v);
            }
          }
        }
      }
      grid[c].push_back(v);
    }
  } else {
    std::map<std::array<double, 3>, std::uint32_t> seen;
    for (std::uint32_t v = 0; v < n; ++v) {
      const Vec3& p = mesh.vertices[v];
      const auto [it, inserted] = seen.try_emplace({p.x(), p.y(), p.z()}, v);
      if (!inserted) join(it->second, v);
    }
  }

  std::vector<Face> faces;
  for (const Face& f : mesh.faces) {
    const Face g{find(f[0]), find(f[1]), find(f[2])};
    if (g[0] != g[1] && g[1] != g[2] && g[0] != g[2]) faces.push_back(g);
  }
  TriMesh out;
  std::vector<std::uint32_t> remap(n, std::numeric_limits<std::uint32_t>::max());
  std::vector<char> used(n, 0);
  for (const Face& f : faces) {
    for (std::uint32_t v : f) used[v] = 1;
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!used[v]) continue;
    remap[v] = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[v]);
  }
  for (const Face& f : faces) out.faces.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
  return out;
}

void export_obj(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.precision(17);
  for (const Vec3& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const Face& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

}  // namespace rodjoint
