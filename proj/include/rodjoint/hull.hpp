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

#include <span>
#include <vector>

#include "rodjoint/mesh.hpp"

namespace rodjoint {

/// Convex hull of a point set as a closed, outward-oriented mesh. Only hull
/// vertices are kept; their coordinates are copied bit-exactly from the
/// input. Throws kDegenerateHull when the points span no volume.
TriMesh convex_hull(std::span<const Vec3> points);

/// 2D convex hull, counter-clockwise, without collinear boundary points.
std::vector<Vec2> convex_hull_2d(std::span<const Vec2> points);

}  // namespace rodjoint
