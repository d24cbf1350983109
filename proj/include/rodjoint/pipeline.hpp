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

#include <filesystem>
#include <vector>

#include "rodjoint/assembly.hpp"
#include "rodjoint/engraver.hpp"
#include "rodjoint/fabrication.hpp"
#include "rodjoint/feasibility.hpp"
#include "rodjoint/joint.hpp"

namespace rodjoint {

struct PipelineOptions {
  PackOptions pack;
  double jig_pitch = 20.0;
  EngraveParams engrave;  // id and depth are set per joint
  bool engrave_ids = true;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Stock and padding come from the document parameters.
PackOptions pack_options_for(const FabricationParams& params, PackOptions base);

/// Engraves each joint's two-digit id, depth sigma / 2, with an RNG stream
/// derived from the engraving seed and the node index.
std::vector<JointSolid> engrave_joints(const std::vector<JointSolid>& joints, const FabricationParams& params,
                                       const EngraveParams& base, unsigned threads = 0);

/// Rod lengths of every edge, in edge order. Throws kSwallowedEdge,
/// kDegenerateAngle or kDegenerateEdge naming the first unusable edge.
std::vector<double> rod_lengths(const DerivedData& derived, const EdgeNetwork& net);

CutPlan plan_cuts(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived,
                  const PackOptions& options);

struct PipelineResult {
  DerivedData derived;
  std::vector<JointSolid> joints;  // engraved when requested
  CutPlan cut_plan;
  AssemblyPlan assembly;
  Diagnostics diagnostics;
};

/// Full export: joint_NN.stl (print oriented, engraved), rods.csv,
/// cutplan.svg, cutplan.txt, assembly.txt and diagnostics.json.
PipelineResult run_all(const Document& doc, const PipelineOptions& options, const std::filesystem::path& dir);

/// Writes `data` to `path` in binary mode; throws kIoError.
void write_file(const std::filesystem::path& path, const std::string& data);

}  // namespace rodjoint
