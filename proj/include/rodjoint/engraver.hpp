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
#include <string>
#include <vector>

#include "rodjoint/mesh.hpp"

namespace rodjoint {

struct EngraveParams {
  int sample_count = 10000;
  int k_neighbors = 200;
  int ao_rays = 64;
  double text_depth = 1.0;  // sigma / 2
  std::string id = "00";    // digits only
  std::uint64_t seed = 1;

  void check() const;
};

struct SurfaceSample {
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  std::uint32_t face = 0;
  double curvature = 0.0;  // normalized to [0, 1]
  double occlusion = 0.0;  // [0, 1]
  double score = 0.0;      // curvature + normalized occlusion
};

/// Area-weighted uniform samples; reproducible for a fixed seed.
std::vector<SurfaceSample> sample_surface(const TriMesh& mesh, int n, std::uint64_t seed);

/// Absolute dihedral angle (radians) at the mesh edge nearest to each
/// sample.
std::vector<double> nearest_edge_dihedrals(const TriMesh& mesh, const std::vector<SurfaceSample>& samples);

/// Raw curvature: distance-weighted mean of the neighbors' nearest-edge
/// dihedrals over the k nearest other samples. `radius_out` receives the
/// distance to the furthest of those neighbors.
std::vector<double> curvature_scores(const TriMesh& mesh, const std::vector<SurfaceSample>& samples, int k,
                                     std::vector<double>* radius_out = nullptr);

/// Fraction of cosine-weighted hemisphere rays that hit the mesh.
std::vector<double> occlusion_scores(const TriMesh& mesh, const std::vector<SurfaceSample>& samples, int rays,
                                     std::uint64_t seed);

struct EngravingSite {
  std::vector<SurfaceSample> samples;  // with normalized scores
  std::size_t winner = 0;
  double radius = 0.0;  // distance to the furthest of the winner's neighbors
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  Vec3 up = Vec3::UnitY();     // text up, in the tangent plane
  Vec3 right = Vec3::UnitX();  // text baseline direction
};

/// Scores every sample and picks the minimum of curvature + occlusion
/// (both min-max normalized). Among equal minima the sample furthest from
/// any non-minimal sample wins, then the lowest index.
EngravingSite select_site(const TriMesh& mesh, const EngraveParams& params);

/// Seven-segment glyph boxes for `id`, centered on the site, strokes
/// `stroke` wide, spanning [-depth, depth] along the normal.
std::vector<TriMesh> glyph_solids(const std::string& id, const EngravingSite& site, double depth, double stroke);

/// The same segments merged into one solid.
TriMesh glyph_solid(const std::string& id, const EngravingSite& site, double depth, double stroke);

struct EngraveResult {
  TriMesh mesh;
  EngravingSite site;
};

/// Subtracts the id glyphs at the selected site. `stroke` defaults to
/// depth / 2 (sigma / 4). Throws kEngraveFailure when the boolean fails
/// after three retries.
EngraveResult place_engraving(const TriMesh& mesh, const EngraveParams& params, double stroke = 0.0);

/// Per-joint RNG seed derived from a global seed and the node index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace rodjoint
