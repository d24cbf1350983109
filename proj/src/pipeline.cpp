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

#include "rodjoint/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <optional>
#include <thread>

#include "rodjoint/stl.hpp"

namespace rodjoint {

namespace {

// Runs fn(i) for i in [0, n) on a small pool; rethrows the first failure
// in index order.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

PackOptions pack_options_for(const FabricationParams& params, PackOptions base) {
  base.stock_length = params.stock_length;
  base.padding = params.stock_padding;
  return base;
}

std::vector<JointSolid> engrave_joints(const std::vector<JointSolid>& joints, const FabricationParams& params,
                                       const EngraveParams& base, unsigned threads) {
  std::vector<JointSolid> out(joints);
  parallel_for(joints.size(), threads, [&](std::size_t i) {
    EngraveParams ep = base;
    ep.id = node_label(joints[i].node);
    ep.text_depth = params.thickness / 2.0;
    ep.seed = derive_seed(base.seed, joints[i].node);
    out[i].mesh = place_engraving(joints[i].mesh, ep).mesh;
  });
  return out;
}

std::vector<double> rod_lengths(const DerivedData& derived, const EdgeNetwork& net) {
  std::vector<double> lengths;
  for (EdgeId e = 0; e < derived.edges.size(); ++e) {
    const DerivedEdge& d = derived.edges[e];
    const std::string name = "edge " + std::to_string(e) + " {" + std::to_string(net.edges[e].a) + "," +
                             std::to_string(net.edges[e].b) + "}";
    if (d.degenerate_length) throw Error(ErrorCode::kDegenerateEdge, name + " has zero length");
    if (d.degenerate_angle) throw Error(ErrorCode::kDegenerateAngle, name + " is parallel to a neighboring edge");
    if (d.swallowed) throw Error(ErrorCode::kSwallowedEdge, name + ": sockets overlap");
    lengths.push_back(d.rod_length);
  }
  return lengths;
}

CutPlan plan_cuts(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived,
                  const PackOptions& options) {
  const std::vector<double> lengths = rod_lengths(derived, net);
  std::vector<EdgeId> ids(lengths.size());
  for (EdgeId e = 0; e < ids.size(); ++e) ids[e] = e;
  return pack_cuts(lengths, pack_options_for(params, options), ids);
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << data;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

PipelineResult run_all(const Document& doc, const PipelineOptions& options, const std::filesystem::path& dir) {
  doc.params.check();
  PipelineResult result;
  result.derived = derive(doc.network, doc.params);
  result.cut_plan = plan_cuts(doc.network, doc.params, result.derived, options.pack);
  const std::vector<JointSolid> plain = build_all_joints(doc.network, doc.params, result.derived, options.threads);
  result.diagnostics = diagnose(doc.network, doc.params, result.derived, plain, true);
  result.joints = options.engrave_ids ? engrave_joints(plain, doc.params, options.engrave, options.threads) : plain;
  result.assembly = assembly_order(doc.network);

  write_build_outputs(dir, result.joints, doc.network, result.derived);
  const double diameter = 2.0 * doc.params.rod_radius;
  write_file(dir / "cutplan.svg", cutplan_svg(result.cut_plan, options.jig_pitch, diameter));
  write_file(dir / "cutplan.txt", cutplan_text(result.cut_plan));
  write_file(dir / "assembly.txt", assembly_text(result.assembly, result.derived));
  write_file(dir / "diagnostics.json", diagnostics_to_json(result.diagnostics).dump(2) + "\n");
  return result;
}

}  // namespace rodjoint
