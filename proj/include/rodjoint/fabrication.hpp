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
#include "rodjoint/network.hpp"

namespace rodjoint {

struct JointSolid;

struct PrintOrientation {
  NodeId node = 0;
  Mat3 rotation = Mat3::Identity();
};

/// Rotation taking the node's summed outgoing edge direction to +z
/// (identity when the sum nearly cancels).
PrintOrientation print_orientation(const EdgeNetwork& net, NodeId node);

/// The joint rotated for printing and lifted so that its lowest point is
/// at z = 0.
TriMesh print_ready(const JointSolid& joint);

struct CutPiece {
  EdgeId edge = 0;
  double length = 0.0;
};

struct CutBin {
  std::vector<CutPiece> pieces;  // cut order
  double used() const;
};

struct CutPlan {
  std::vector<CutBin> bins;
  double stock_length = 0.0;
  double padding = 0.0;
  double kerf = 0.0;
  double waste_total = 0.0;
  std::size_t bins_used() const { return bins.size(); }
  double capacity() const { return stock_length - 2.0 * padding; }
};

struct PackOptions {
  double stock_length = 1000.0;
  double padding = 10.0;
  double kerf = 0.0;
  int restarts = 200;
  std::uint64_t seed = 1;
};

/// First-fit over the decreasing order and `restarts` seeded shuffles
/// (every ordering when there are at most eight rods); keeps the packing
/// with the fewest bins, then the emptiest last bin, then the smallest
/// bin signature. `edges` names the rods (defaults to 0..n-1). Throws
/// kOversizeRod for a rod longer than the usable stock and
/// kInvalidArgument for non-positive lengths.
CutPlan pack_cuts(const std::vector<double>& lengths, const PackOptions& options,
                  const std::vector<EdgeId>& edges = {});

/// Bins used by plain first-fit-decreasing.
std::size_t first_fit_decreasing_bins(const std::vector<double>& lengths, double capacity, double kerf = 0.0);

/// Laser-cutter SVG: one row per bin at y = row * jig_pitch, one vertical
/// hairline per cut, `rod_diameter` + 2 mm long.
std::string cutplan_svg(const CutPlan& plan, double jig_pitch, double rod_diameter);

/// Human-readable manifest: bin, ordered pieces, waste.
std::string cutplan_text(const CutPlan& plan);

}  // namespace rodjoint
