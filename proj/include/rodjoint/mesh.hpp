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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rodjoint/types.hpp"

namespace rodjoint {

using Face = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh. Faces are wound counter-clockwise when seen from
/// outside, so the right-hand normal points out of the solid.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;

  bool empty() const { return faces.empty(); }
  Vec3 face_normal(std::size_t f) const;  // unnormalized, length = 2 * area
  double face_area(std::size_t f) const;
  Eigen::AlignedBox3d bounds() const;
};

/// Affine map v -> linear * v + translation.
struct Affine {
  Mat3 linear = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Affine identity() { return {}; }
  static Affine translate(const Vec3& t) { return {Mat3::Identity(), t}; }
  static Affine scale(const Vec3& s) { return {s.asDiagonal().toDenseMatrix(), Vec3::Zero()}; }

  Vec3 apply(const Vec3& v) const { return linear * v + translation; }
  /// Composition: (a * b).apply(v) == a.apply(b.apply(v)).
  friend Affine operator*(const Affine& a, const Affine& b) {
    return {a.linear * b.linear, a.linear * b.translation + a.translation};
  }
};

// ---------------------------------------------------------------------------
// Primitives

/// Closed prism over the regular p-gon inscribed in the unit circle, z in
/// [0, 1]. Vertex k (k < p) is base vertex at angle pi/p + 2*pi*k/p, vertex
/// p + k the top vertex above it. Caps are fans from vertex 0 (resp. p).
TriMesh unit_prism(int sides);

/// Index range of the base ring (z = 0) and top ring (z = 1) of unit_prism.
std::vector<std::uint32_t> prism_base_ring(int sides);
std::vector<std::uint32_t> prism_top_ring(int sides);

/// Axis-aligned box [lo, hi].
TriMesh box_mesh(const Vec3& lo, const Vec3& hi);

/// Rotation taking e_z onto `direction` (which must be unit length).
/// Uses R = I + [k]x + [k]x^2 / (1 + e_z . w) with k = e_z x w. For
/// w.z < 0 the factor is evaluated as (1 - w.z) / |k|^2, which stays
/// accurate near -e_z; w = -e_z exactly gives diag(1,-1,-1).
Mat3 rotation_to(const Vec3& direction);

/// Matrix of the cross product by `x`: cross_matrix(x) * y == x.cross(y).
Mat3 cross_matrix(const Vec3& x);

/// Applies `a` to every vertex. Winding is reversed when det(linear) < 0
/// so outward normals survive mirroring.
TriMesh transform(const TriMesh& mesh, const Affine& a);

// ---------------------------------------------------------------------------
// Validity

struct SolidityReport {
  bool indices_in_range = true;
  bool closed = true;             // every undirected edge used by exactly 2 faces
  bool consistently_oriented = true;  // and those two faces traverse it oppositely
  bool no_degenerate_faces = true;    // no face repeats a vertex index
  double signed_volume = 0.0;

  bool solid() const {
    return indices_in_range && closed && consistently_oriented && no_degenerate_faces && signed_volume > 0;
  }
};

SolidityReport check_solidity(const TriMesh& mesh);
bool is_solid(const TriMesh& mesh);

/// Number of connected components (by shared vertex index).
std::size_t component_count(const TriMesh& mesh);

/// Meshes whose volume is below this many mm^3 count as empty.
inline constexpr double kEmptyVolume = 1e-9;

// ---------------------------------------------------------------------------
// Mass properties

struct MassProperties {
  double volume = 0.0;   // mm^3
  double mass = 0.0;     // kg
  Vec3 center_of_mass = Vec3::Zero();  // mm
};

/// Exact volume integrals over the closed surface (divergence theorem).
double signed_volume(const TriMesh& mesh);

/// `density` in kg/m^3. Throws kNotSolid for meshes failing check_solidity.
MassProperties mass_properties(const TriMesh& mesh, double density);

/// Concatenates meshes without merging vertices.
TriMesh merge(std::span<const TriMesh> meshes);

/// Merges vertices within `tol` of each other (a cluster keeps the position
/// of its lowest-index vertex) and drops faces that lost a corner. Unused
/// vertices are removed and the rest keep their order.
TriMesh weld_vertices(const TriMesh& mesh, double tol);

/// Debug export: "v x y z" and "f a b c" lines (1-based).
void export_obj(const TriMesh& mesh, const std::filesystem::path& path);

}  // namespace rodjoint
