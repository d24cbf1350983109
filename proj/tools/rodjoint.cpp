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

// Command-line driver: check, build, engrave, cutplan, order, serve, all.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rodjoint/document.hpp"
#include "rodjoint/pipeline.hpp"
#include "rodjoint/session.hpp"
#include "rodjoint/stl.hpp"

namespace fs = std::filesystem;
using namespace rodjoint;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInput = 2;

// Design problems exit 1; unreadable input or output exits 2.
int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDocument:
    case ErrorCode::kIoError:
    case ErrorCode::kMalformedStl:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kStaleReference:
      return kExitInput;
    default:
      return kExitInfeasible;
  }
}

std::string summary_line(const Document& doc, const Diagnostics& d) {
  char buf[512];
  std::string balance;
  if (!d.balance.known) {
    balance = "balance unknown (" + d.balance.problem + ")";
  } else {
    char b[128];
    std::snprintf(b, sizeof b, "%s, margin %.3f mm", d.balance.stable ? "stable" : "unstable", d.balance.margin);
    balance = b;
  }
  std::snprintf(buf, sizeof buf,
                "%s: %zu nodes, %zu edges, %zu intersecting rod pairs, %zu swallowed, %zu degenerate nodes, "
                "%zu degenerate edges, %s",
                d.feasible() ? "feasible" : "infeasible", doc.network.nodes.size(), doc.network.edges.size(),
                d.intersecting_edge_pairs.size(), d.swallowed_edges.size(), d.degenerate_nodes.size(),
                d.degenerate_edges.size(), balance.c_str());
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rodjoint: joints, rods, cut plans and assembly order for edge-network designs"};
  app.require_subcommand(1);

  std::string input;
  std::string output;
  bool json_out = false;
  PipelineOptions options;
  int port = 7878;
  bool stdio = false;
  std::optional<std::size_t> start;

  auto add_input = [&](CLI::App* cmd) { cmd->add_option("file", input, "Design document (JSON)")->required(); };
  auto add_pack = [&](CLI::App* cmd) {
    cmd->add_option("--seed", options.pack.seed, "Packing RNG seed");
    cmd->add_option("--restarts", options.pack.restarts, "Random packing restarts")->check(CLI::NonNegativeNumber);
    cmd->add_option("--kerf", options.pack.kerf, "Saw or laser kerf (mm)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--jig-pitch", options.jig_pitch, "Row pitch of the cutting jig (mm)")
        ->check(CLI::PositiveNumber);
  };
  auto add_engrave = [&](CLI::App* cmd) {
    cmd->add_option("--engrave-seed", options.engrave.seed, "Engraving RNG seed");
    cmd->add_option("--samples", options.engrave.sample_count, "Surface samples per joint");
    cmd->add_option("--k", options.engrave.k_neighbors, "Neighbors in the curvature average");
    cmd->add_option("--ao-rays", options.engrave.ao_rays, "Occlusion rays per sample");
  };

  CLI::App* check = app.add_subcommand("check", "Report feasibility; exit 1 when infeasible");
  add_input(check);
  check->add_flag("--json", json_out, "Print diagnostics as JSON");

  CLI::App* build = app.add_subcommand("build", "Write joint STL files and rods.csv");
  add_input(build);
  build->add_option("-o,--output", output, "Output directory")->required();

  CLI::App* engrave = app.add_subcommand("engrave", "Write engraved joint STL files");
  add_input(engrave);
  engrave->add_option("-o,--output", output, "Output directory")->required();
  add_engrave(engrave);

  CLI::App* cutplan = app.add_subcommand("cutplan", "Write the laser cut plan SVG");
  add_input(cutplan);
  cutplan->add_option("-o,--output", output, "SVG file")->required();
  add_pack(cutplan);

  CLI::App* order = app.add_subcommand("order", "Write the assembly checklist");
  add_input(order);
  order->add_option("-o,--output", output, "Text file")->required();
  order->add_option("--start", start, "Start node (default: lowest)");

  CLI::App* serve = app.add_subcommand("serve", "Serve the session protocol on 127.0.0.1");
  add_input(serve);
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_flag("--stdio", stdio, "Serve on standard input and output instead");
  add_pack(serve);
  add_engrave(serve);

  CLI::App* all = app.add_subcommand("all", "Run the whole pipeline into a directory");
  add_input(all);
  all->add_option("-o,--output", output, "Output directory")->required();
  add_pack(all);
  add_engrave(all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    const Document doc = load_document(input);
    doc.params.check();

    if (check->parsed()) {
      const Diagnostics d = diagnose(doc.network, doc.params);
      if (json_out) {
        std::cout << diagnostics_to_json(d).dump(2) << '\n';
      } else {
        std::cout << summary_line(doc, d) << '\n';
      }
      return d.feasible() ? kExitOk : kExitInfeasible;
    }

    if (serve->parsed()) {
      SessionState state;
      state.document = doc;
      state.options = options;
      if (stdio) {
        serve_stream(state, std::cin, std::cout);
      } else {
        serve_tcp(state, port, 0, [](int bound) { std::cerr << "listening on 127.0.0.1:" << bound << '\n'; });
      }
      return kExitOk;
    }

    const DerivedData derived = derive(doc.network, doc.params);

    if (order->parsed()) {
      const AssemblyPlan plan = assembly_order(doc.network, start);
      write_file(output, assembly_text(plan, derived));
      std::cout << plan.steps.size() << " steps written to " << output << '\n';
      return kExitOk;
    }

    if (cutplan->parsed()) {
      const CutPlan plan = plan_cuts(doc.network, doc.params, derived, options.pack);
      write_file(output, cutplan_svg(plan, options.jig_pitch, 2.0 * doc.params.rod_radius));
      std::cout << cutplan_text(plan);
      return kExitOk;
    }

    if (build->parsed() || engrave->parsed()) {
      rod_lengths(derived, doc.network);  // names the first unusable edge
      std::vector<JointSolid> joints = build_all_joints(doc.network, doc.params, derived);
      if (engrave->parsed()) joints = engrave_joints(joints, doc.params, options.engrave);
      ensure_dir(output);
      write_build_outputs(output, joints, doc.network, derived);
      std::cout << joints.size() << " joints written to " << output << '\n';
      return kExitOk;
    }

    if (all->parsed()) {
      ensure_dir(output);
      const PipelineResult result = run_all(doc, options, output);
      std::cout << summary_line(doc, result.diagnostics) << '\n';
      std::cout << result.joints.size() << " joints, " << result.cut_plan.bins_used() << " stock bins, "
                << result.assembly.steps.size() << " assembly steps written to " << output << '\n';
      if (!result.diagnostics.feasible()) std::cerr << "warning: design is not feasible, see diagnostics.json\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "rodjoint: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "rodjoint: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
