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

#include <functional>
#include <span>
#include <vector>

#include "rodjoint/mesh.hpp"

namespace rodjoint {

enum class BooleanOp { kUnion, kDifference, kIntersection };

/// Membership of a point in each operand, in operand order.
using InsideFlags = std::vector<char>;

/// Solid described by a predicate over the operands' inside flags. All
/// intersections are computed in exact rational arithmetic; the result is
/// rounded to doubles once at the end and then checked for solidity
/// (kBooleanFailure when the check fails). Empty operands are allowed and
/// count as the empty set. An empty mesh is returned when nothing remains.
TriMesh csg(std::span<const TriMesh> operands, const std::function<bool(const InsideFlags&)>& inside);

TriMesh boolean(BooleanOp op, const TriMesh& a, const TriMesh& b);

/// (a_0 u ... u a_k) minus (b_0 u ... u b_m), in one pass.
TriMesh union_minus(std::span<const TriMesh> added, std::span<const TriMesh> removed);

}  // namespace rodjoint
