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

// Acceptance suite: one PASS/FAIL line per criterion. Exits 0 when every
// failure is a documented known case and 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rodjoint/assembly.hpp"
#include "rodjoint/engraver.hpp"
#include "rodjoint/fabrication.hpp"
#include "rodjoint/feasibility.hpp"
#include "rodjoint/intersect.hpp"
#include "rodjoint/joint.hpp"
#include "rodjoint/pipeline.hpp"
#include "rodjoint/stl.hpp"
#include "test_support.hpp"

namespace rodjoint {
namespace {

namespace fs = std::filesystem;
using std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  bool known = false;  // a documented, expected failure
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

// Joints, engravings and sites of one fixture, shared by several criteria.
struct FixtureBuild {
  std::string name;
  Document doc;
  DerivedData derived;
  std::vector<JointSolid> joints;
  std::vector<EngraveResult> engraved;
  std::vector<EngraveParams> engrave_params;
};

const std::vector<FixtureBuild>& fixture_builds() {
  static const std::vector<FixtureBuild> builds = [] {
    std::vector<FixtureBuild> out;
    for (const std::string& name : testing::solidity_fixtures()) {
      FixtureBuild b;
      b.name = name;
      b.doc = testing::load_fixture(name);
      b.derived = derive(b.doc.network, b.doc.params);
      b.joints = build_all_joints(b.doc.network, b.doc.params, b.derived);
      for (const JointSolid& j : b.joints) {
        EngraveParams ep;
        ep.id = node_label(j.node);
        ep.text_depth = b.doc.params.thickness / 2.0;
        ep.seed = derive_seed(1, j.node);
        b.engraved.push_back(place_engraving(j.mesh, ep));
        b.engrave_params.push_back(ep);
      }
      out.push_back(std::move(b));
    }
    return out;
  }();
  return builds;
}

std::vector<Document> length_networks() {
  std::vector<Document> docs;
  for (const std::string& name : testing::solidity_fixtures()) docs.push_back(testing::load_fixture(name));
  docs.push_back(testing::load_fixture("path"));
  docs.push_back(testing::tower_document());
  return docs;
}

// Random two-edge nodes; the two rod solids must not intersect.
Outcome offset_safety() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> theta_deg(2.0, 178.0), radius(2.0, 10.0), eps(-0.2, 0.3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int overlaps = 0, overlaps_negative = 0, negative = 0;
  double worst_positive_eps = -1.0;
  const int cases = 500;
  for (int i = 0; i < cases; ++i) {
    const double theta = theta_deg(rng) * pi / 180.0;
    FabricationParams params;
    params.rod_radius = radius(rng);
    params.tolerance = eps(rng);
    Vec3 axis(unit(rng), unit(rng), unit(rng));
    if (axis.norm() < 1e-3) axis = Vec3::UnitZ();
    const Mat3 rot = Eigen::AngleAxisd(unit(rng) * pi, axis.normalized()).toRotationMatrix();
    const double g = safe_offset(std::cos(theta), params.rod_radius + params.tolerance);
    const double length = g + 2.0 * params.socket_length + 60.0;
    EdgeNetwork net;
    const Vec3 origin(unit(rng) * 100, unit(rng) * 100, unit(rng) * 100);
    net.nodes = {origin, origin + length * (rot * Vec3::UnitX()),
                 origin + length * (rot * Vec3(std::cos(theta), std::sin(theta), 0.0))};
    net.edges = {{0, 1}, {0, 2}};
    const DerivedData derived = derive(net, params);
    const bool hit =
        intersect_meshes(rod_solid(net, params, derived, 0), rod_solid(net, params, derived, 1));
    if (params.tolerance < 0) ++negative;
    if (hit) {
      ++overlaps;
      if (params.tolerance < 0) {
        ++overlaps_negative;
      } else {
        worst_positive_eps = std::max(worst_positive_eps, params.tolerance);
      }
    }
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = overlaps == 0 && elapsed < 30.0;
  o.known = overlaps == overlaps_negative && elapsed < 30.0;
  o.detail = std::to_string(cases - overlaps) + "/" + std::to_string(cases) + " disjoint, " +
             std::to_string(overlaps_negative) + " of " + std::to_string(negative) +
             " negative-eps cases overlap, " + std::to_string(overlaps - overlaps_negative) +
             " non-negative-eps overlaps" + fmt(", %.2f s", elapsed);
  if (o.known && !o.pass) o.detail += " (known: a negative eps pulls the rods into each other)";
  return o;
}

Outcome formula_anchors() {
  bool ok = true;
  std::string why;
  for (double r_eff : {0.9, 1.0, 3.275, 6.35, 10.3}) {
    if (safe_offset(0.0, r_eff) != r_eff) {
      ok = false;
      why += fmt(" c=0 gives %.17g for %.17g;", safe_offset(0.0, r_eff), r_eff);
    }
  }
  const double cot8 = 1.0 / std::tan(8.0 * pi / 180.0);
  const double anchor = safe_offset(std::cos(16.0 * pi / 180.0), 1.0);
  if (std::abs(anchor - cot8) > 1e-9) {
    ok = false;
    why += fmt(" 16 deg offset %.17g vs %.17g;", anchor, cot8);
  }
  std::size_t edges = 0;
  for (const Document& doc : length_networks()) {
    const DerivedData d = derive(doc.network, doc.params);
    for (EdgeId e = 0; e < doc.network.edges.size(); ++e, ++edges) {
      const Edge& edge = doc.network.edges[e];
      const double len = (doc.network.nodes[edge.b] - doc.network.nodes[edge.a]).norm();
      if (d.edges[e].rod_length != len - d.edges[e].offset_tip - d.edges[e].offset_tail) {
        ok = false;
        why += " edge " + std::to_string(e) + " length mismatch;";
      }
    }
  }
  Outcome o;
  o.pass = ok;
  o.detail = ok ? fmt("c=0 exact, |g(16 deg) - cot 8 deg| = %.2g, l exact on %g edges", std::abs(anchor - cot8),
                      static_cast<double>(edges))
                : why;
  return o;
}

Outcome solidity() {
  int meshes = 0, bad = 0;
  std::string why;
  auto check = [&](const TriMesh& m, const std::string& label) {
    ++meshes;
    std::string reason;
    if (!testing::oracle_solid(m, &reason)) {
      ++bad;
      why += " " + label + ": " + reason + ";";
    }
  };
  for (const FixtureBuild& b : fixture_builds()) {
    for (std::size_t i = 0; i < b.joints.size(); ++i) {
      const std::string label = b.name + " joint " + node_label(b.joints[i].node);
      check(b.joints[i].mesh, label);
      check(stl_image(b.joints[i].mesh), label + " stl");
      check(b.engraved[i].mesh, label + " engraved");
      check(stl_image(b.engraved[i].mesh), label + " engraved stl");
    }
  }
  Outcome o;
  o.pass = bad == 0;
  o.detail = std::to_string(meshes - bad) + "/" + std::to_string(meshes) +
             " joint meshes solid (plain, engraved and their STL images)" + why;
  return o;
}

Outcome scale_invariance() {
  double worst_volume = 0.0, worst_length = 0.0;
  for (const FixtureBuild& b : fixture_builds()) {
    Document big = b.doc;
    for (Vec3& p : big.network.nodes) p *= 2.0;
    const DerivedData derived = derive(big.network, big.params);
    const std::vector<JointSolid> joints = build_all_joints(big.network, big.params, derived);
    for (std::size_t i = 0; i < joints.size(); ++i) {
      const double v1 = testing::oracle_volume(b.joints[i].mesh);
      const double v2 = testing::oracle_volume(joints[i].mesh);
      worst_volume = std::max(worst_volume, std::abs(v2 - v1) / v1);
    }
    for (EdgeId e = 0; e < big.network.edges.size(); ++e) {
      const Edge& edge = b.doc.network.edges[e];
      const double len = (b.doc.network.nodes[edge.b] - b.doc.network.nodes[edge.a]).norm();
      const DerivedEdge& d = b.derived.edges[e];
      const double expected = 2.0 * len - d.offset_tip - d.offset_tail;
      worst_length = std::max(worst_length, std::abs(derived.edges[e].rod_length - expected) / expected);
    }
  }
  Outcome o;
  o.pass = worst_volume <= 1e-6 && worst_length <= 1e-12;
  o.detail = fmt("worst joint volume change %.2g relative, worst rod length deviation %.2g relative", worst_volume,
                 worst_length);
  return o;
}

Outcome no_twist() {
  double worst = 0.0;
  std::size_t edges = 0;
  for (const Document& doc : length_networks()) {
    const DerivedData derived = derive(doc.network, doc.params);
    for (EdgeId e = 0; e < doc.network.edges.size(); ++e) {
      if (!derived.edges[e].usable()) continue;
      ++edges;
      const auto [tip, tail] = socket_pieces(doc.network, doc.params, derived, e);
      const Vec3 w = derived.edges[e].frame.direction;
      const Vec3 origin = doc.network.nodes[derived.edges[e].frame.tip];
      auto project = [&](const Vec3& v) { return Vec3((v - origin) - w.dot(v - origin) * w); };
      if (tip.outlet_vertices.size() != tail.outlet_vertices.size()) return {false, false, "ring sizes differ"};
      for (std::size_t k = 0; k < tip.outlet_vertices.size(); ++k) {
        const Vec3 a = project(tip.mesh.vertices[tip.outlet_vertices[k]]);
        const Vec3 c = project(tail.mesh.vertices[tail.outlet_vertices[k]]);
        worst = std::max(worst, (a - c).norm());
      }
    }
  }
  Outcome o;
  o.pass = worst <= 1e-9;
  o.detail = fmt("worst outlet vertex offset %.2g mm over %g edges", worst, static_cast<double>(edges));
  return o;
}

// Minimum bin count over every set partition of the rods.
std::size_t optimal_bins(const std::vector<double>& lengths, double capacity) {
  std::vector<double> used;
  std::size_t best = lengths.size();
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (used.size() >= best) return;
    if (i == lengths.size()) {
      best = used.size();
      return;
    }
    for (std::size_t b = 0; b < used.size(); ++b) {
      if (used[b] + lengths[i] <= capacity) {
        used[b] += lengths[i];
        rec(i + 1);
        used[b] -= lengths[i];
      }
    }
    used.push_back(lengths[i]);
    rec(i + 1);
    used.pop_back();
  };
  rec(0);
  return best;
}

Outcome packing() {
  const auto start = Clock::now();
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> len(40, 900);
  std::uniform_int_distribution<int> count(1, 8);
  int matches = 0;
  const int instances = 200;
  for (int i = 0; i < instances; ++i) {
    PackOptions opt;
    opt.seed = static_cast<std::uint64_t>(i);
    std::vector<double> lengths(static_cast<std::size_t>(count(rng)));
    for (double& l : lengths) l = std::round(len(rng) * 10) / 10;
    if (pack_cuts(lengths, opt).bins_used() == optimal_bins(lengths, opt.stock_length - 2 * opt.padding)) {
      ++matches;
    }
  }
  PackOptions five;
  five.padding = 0;
  const std::size_t example = pack_cuts({600, 500, 400, 300, 200}, five).bins_used();
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = matches == instances && example == 2 && elapsed < 10.0;
  o.detail = std::to_string(matches) + "/" + std::to_string(instances) + " optimal, five-length example " +
             std::to_string(example) + " bins" + fmt(", %.2f s", elapsed);
  return o;
}

// Centre of mass from fan volumes of the joint meshes and analytic prism
// rods centred at mid-rod.
Vec3 oracle_com(const Document& doc, const DerivedData& derived, const std::vector<JointSolid>& joints) {
  long double mass = 0;
  Eigen::Matrix<long double, 3, 1> moment = Eigen::Matrix<long double, 3, 1>::Zero();
  for (const JointSolid& j : joints) {
    const TriMesh& m = j.mesh;
    long double vol = 0;
    Eigen::Matrix<long double, 3, 1> first = Eigen::Matrix<long double, 3, 1>::Zero();
    const Eigen::Matrix<long double, 3, 1> o = m.vertices[0].cast<long double>();
    for (const Face& f : m.faces) {
      const auto a = m.vertices[f[0]].cast<long double>().eval();
      const auto b = m.vertices[f[1]].cast<long double>().eval();
      const auto c = m.vertices[f[2]].cast<long double>().eval();
      const long double v = (a - o).dot((b - o).cross(c - o)) / 6;
      vol += v;
      first += v * (o + a + b + c) / 4;
    }
    const long double kg = vol * 1e-9L * doc.params.plastic_density;
    mass += kg;
    moment += kg * first / vol;
  }
  const int p = doc.params.profile.sides();
  const double r = doc.params.rod_radius;
  const double area = 0.5 * p * r * r * std::sin(2 * pi / p);
  for (EdgeId e = 0; e < doc.network.edges.size(); ++e) {
    const DerivedEdge& d = derived.edges[e];
    const Vec3 tip = doc.network.nodes[d.frame.tip];
    const Vec3 w = (doc.network.nodes[d.frame.tail] - tip).normalized();
    const Vec3 mid = tip + (d.offset_tip + 0.5 * d.rod_length) * w;
    const long double kg = static_cast<long double>(area) * d.rod_length * 1e-9L * doc.params.wood_density;
    mass += kg;
    moment += kg * mid.cast<long double>();
  }
  return (moment / mass).cast<double>();
}

Outcome balance() {
  const Document doc = testing::load_fixture("cube_frame");
  const DerivedData derived = derive(doc.network, doc.params);
  const std::vector<JointSolid> joints = build_all_joints(doc.network, doc.params, derived);
  const BalanceReport cube = balance_check(doc.network, doc.params, derived, joints);
  const double side = (doc.network.nodes[1] - doc.network.nodes[0]).norm();
  const double excess = std::abs(cube.margin - side / 2);
  const bool cube_ok = cube.stable && excess <= 1.0;

  Document shifted = doc;
  for (Vec3& v : shifted.network.nodes) {
    if (v.z() > side / 2) v.x() += 2.0 * side;
  }
  const DerivedData sd = derive(shifted.network, shifted.params);
  const std::vector<JointSolid> sj = build_all_joints(shifted.network, shifted.params, sd);
  const BalanceReport moved = balance_check(shifted.network, shifted.params, sd, sj);
  const Vec3 com = oracle_com(shifted, sd, sj);
  const double com_error = (moved.com - com).norm() / com.norm();
  const bool shift_ok = !moved.stable && com_error <= 0.01;

  const double outer = doc.params.rod_radius + doc.params.tolerance + doc.params.thickness;
  Outcome o;
  o.pass = cube_ok && shift_ok;
  o.known = !o.pass && shift_ok && cube.stable && cube.margin > side / 2 + 1.0 && cube.margin <= side / 2 + outer;
  o.detail = fmt("cube margin %.3f mm vs half side %.1f (off by %.3f), ", cube.margin, side / 2, excess) +
             std::string(cube.stable ? "stable" : "unstable") + "; shifted top " +
             (moved.stable ? "stable" : "unstable") + fmt(", CoM off oracle by %.2g relative", com_error);
  if (o.known) o.detail += " (known: joint shells touching the ground widen the support square)";
  return o;
}

Outcome assembly() {
  const Document doc = testing::tower_document();
  const EdgeNetwork& net = doc.network;
  const AssemblyPlan plan = assembly_order(net);
  const std::size_t n = net.nodes.size(), m = net.edges.size();
  std::vector<char> placed(n + m, 0);
  std::vector<int> seen(n + m, 0);
  std::size_t bad_prefixes = 0;
  for (const AssemblyStep& s : plan.steps) {
    const std::size_t id = s.kind == StepKind::kPlaceJoint ? s.part : n + s.part;
    placed[id] = 1;
    ++seen[id];
    std::vector<std::size_t> parent(n + m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (EdgeId e = 0; e < m; ++e) {
      if (!placed[n + e]) continue;
      for (NodeId v : {net.edges[e].a, net.edges[e].b}) {
        if (placed[v]) parent[find(n + e)] = find(v);
      }
    }
    std::set<std::size_t> roots;
    for (std::size_t p = 0; p < n + m; ++p) {
      if (placed[p]) roots.insert(find(p));
    }
    if (roots.size() != 1) ++bad_prefixes;
  }
  const bool once = std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
  Outcome o;
  o.pass = n == 28 && m == 52 && plan.steps.size() == 80 && bad_prefixes == 0 && once;
  o.detail = std::to_string(n) + " nodes, " + std::to_string(m) + " edges, " + std::to_string(plan.steps.size()) +
             " steps, " + std::to_string(bad_prefixes) + " disconnected prefixes" +
             (once ? "" : ", a part is missing or repeated");
  return o;
}

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    files[entry.path().filename().string()] = testing::read_file(entry.path());
  }
  return files;
}

Outcome determinism() {
  const std::string design = testing::fixture_path("tower_28_52").string();
  std::vector<std::map<std::string, std::string>> runs;
  double slowest = 0.0;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = testing::temp_dir("acceptance_all_" + std::to_string(run));
    const auto start = Clock::now();
    std::string out;
    const int status = testing::run_command(
        std::string(RODJOINT_CLI) + " all " + design + " --seed 7 --engrave-seed 11 -o " + dir.string(), &out);
    slowest = std::max(slowest, seconds_since(start));
    if (status != 0) return {false, false, "run " + std::to_string(run) + " exited " + std::to_string(status)};
    runs.push_back(directory_bytes(dir));
  }
  std::size_t stl = 0, svg = 0, csv = 0;
  for (const auto& [name, bytes] : runs[0]) {
    const std::string ext = fs::path(name).extension().string();
    stl += ext == ".stl";
    svg += ext == ".svg";
    csv += ext == ".csv";
  }
  const bool same = runs[0] == runs[1];
  Outcome o;
  o.pass = same && stl == 28 && svg == 1 && csv == 1 && slowest < 60.0;
  o.detail = std::to_string(runs[0].size()) + " files (" + std::to_string(stl) + " STL), " +
             (same ? "byte-identical" : "runs differ") + fmt(", slowest run %.1f s", slowest);
  return o;
}

Outcome engraver() {
  int joints = 0, argmin_bad = 0, leaky = 0, not_smaller = 0, moved_winner = 0;
  const Vec3 axis = Vec3(0.3, -0.5, 0.8).normalized();
  const Affine motion{Eigen::AngleAxisd(0.7, axis).toRotationMatrix(), Vec3(12.5, -40, 7)};
  for (const FixtureBuild& b : fixture_builds()) {
    for (std::size_t i = 0; i < b.joints.size(); ++i) {
      ++joints;
      const EngraveResult& r = b.engraved[i];
      const auto& samples = r.site.samples;
      for (const SurfaceSample& s : samples) {
        if (samples[r.site.winner].score > s.score) {
          ++argmin_bad;
          break;
        }
      }
      if (!testing::oracle_solid(r.mesh)) ++leaky;
      if (!(testing::oracle_volume(r.mesh) < testing::oracle_volume(b.joints[i].mesh))) ++not_smaller;
      const EngravingSite moved = select_site(transform(b.joints[i].mesh, motion), b.engrave_params[i]);
      if (moved.winner != r.site.winner) ++moved_winner;
    }
  }
  Outcome o;
  o.pass = argmin_bad == 0 && leaky == 0 && not_smaller == 0 && moved_winner == 0;
  o.detail = std::to_string(joints) + " engraved joints: " + std::to_string(argmin_bad) + " argmin violations, " +
             std::to_string(leaky) + " not watertight, " + std::to_string(not_smaller) +
             " without volume loss, " + std::to_string(moved_winner) + " winners moved by a rigid motion";
  return o;
}

}  // namespace
}  // namespace rodjoint

int main() {
  using rodjoint::Outcome;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, rodjoint::offset_safety}, {2, rodjoint::formula_anchors}, {3, rodjoint::solidity},
      {4, rodjoint::scale_invariance}, {5, rodjoint::no_twist}, {6, rodjoint::packing},
      {7, rodjoint::balance}, {8, rodjoint::assembly}, {9, rodjoint::determinism},
      {10, rodjoint::engraver}};
  bool unexpected = false;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s: %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass && !o.known) unexpected = true;
  }
  return unexpected ? 1 : 0;
}
