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

#include "exact.hpp"
#include "rodjoint/intersect.hpp"

namespace rodjoint::exact {

/// Winding number of a closed mesh around a rational point that is known
/// not to lie on the mesh surface. Uses the generalized winding number when
/// the point is comfortably far from the surface and exact ray parity
/// otherwise.
int winding_number(const TriMesh& mesh, const AabbTree& tree, const QPoint& q);

}  // namespace rodjoint::exact
