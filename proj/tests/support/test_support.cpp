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

#include "test_support.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace rodjoint::testing {

std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(RODJOINT_FIXTURE_DIR) / (name + ".json");
}

Document load_fixture(const std::string& name) { return load_document(fixture_path(name)); }

Document tower_document() {
  Document doc;
  const double radius[4] = {150, 130, 110, 90};
  constexpr int n = 7;
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < n; ++i) {
      const double a = 2 * std::numbers::pi * i / n + k * std::numbers::pi / n * 0.5;
      doc.network.nodes.emplace_back(radius[k] * std::cos(a), radius[k] * std::sin(a), 120.0 * k);
    }
  }
  auto idx = [](int k, int i) { return static_cast<NodeId>(k * n + i % n); };
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < n; ++i) doc.network.edges.push_back({idx(k, i), idx(k, i + 1)});
  }
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < n; ++i) doc.network.edges.push_back({idx(k, i), idx(k + 1, i)});
  }
  for (int i : {0, 2, 4}) doc.network.edges.push_back({idx(0, i), idx(1, i + 1)});
  return doc;
}

std::vector<std::string> solidity_fixtures() {
  return {"tetrahedron", "cube_frame", "stub", "three_way", "acute_pair"};
}

double oracle_volume(const TriMesh& mesh) {
  if (mesh.vertices.empty()) return 0.0;
  const Vec3 o = mesh.vertices.front();
  long double total = 0;
  for (const Face& f : mesh.faces) {
    const Vec3 a = mesh.vertices[f[0]] - o;
    const Vec3 b = mesh.vertices[f[1]] - o;
    const Vec3 c = mesh.vertices[f[2]] - o;
    total += static_cast<long double>(a.dot(b.cross(c)));
  }
  return static_cast<double>(total / 6);
}

bool oracle_solid(const TriMesh& mesh, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (mesh.faces.empty()) return fail("no faces");
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const Face& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      if (f[k] >= mesh.vertices.size()) return fail("index out of range");
      if (f[k] == f[(k + 1) % 3]) return fail("degenerate face");
      ++directed[{f[k], f[(k + 1) % 3]}];
    }
  }
  for (const auto& [e, count] : directed) {
    if (count != 1) return fail("directed edge used twice (orientation or non-manifold)");
    auto it = directed.find({e.second, e.first});
    if (it == directed.end()) return fail("boundary edge (not closed)");
  }
  // Vertex manifoldness: the faces around each vertex form a single cycle.
  std::map<std::uint32_t, std::map<std::uint32_t, std::uint32_t>> fan;  // v -> (next -> prev-around)
  for (const Face& f : mesh.faces) {
    for (int k = 0; k < 3; ++k) fan[f[k]][f[(k + 1) % 3]] = f[(k + 2) % 3];
  }
  for (const auto& [v, links] : fan) {
    std::uint32_t start = links.begin()->first, cur = start;
    std::size_t steps = 0;
    do {
      auto it = links.find(cur);
      if (it == links.end()) return fail("open vertex fan");
      cur = it->second;
      ++steps;
    } while (cur != start && steps <= links.size());
    if (steps != links.size()) return fail("vertex fan is not a single cycle");
  }
  if (!(oracle_volume(mesh) > 0)) return fail("non-positive volume");
  return true;
}

double box_overlap(const Vec3& lo_a, const Vec3& hi_a, const Vec3& lo_b, const Vec3& hi_b) {
  double v = 1.0;
  for (int k = 0; k < 3; ++k) v *= std::max(0.0, std::min(hi_a[k], hi_b[k]) - std::max(lo_a[k], lo_b[k]));
  return v;
}

std::filesystem::path temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  const auto dir = std::filesystem::temp_directory_path() / ("rodjoint_" + tag + "_" + std::to_string(rng() % 1000000000));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_command(const std::string& command, std::string* output) {
  FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return -1;
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  if (output) *output = out;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace rodjoint::testing
