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

#include "rodjoint/stl.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace rodjoint {

namespace {

static_assert(std::endian::native == std::endian::little, "STL writer assumes a little-endian host");

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

void put_f32(std::string& out, float v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

}  // namespace

std::string stl_bytes(const TriMesh& mesh, const std::string& header) {
  std::string out(80, '\0');
  std::memcpy(out.data(), header.data(), std::min<std::size_t>(header.size(), 80));
  put_u32(out, static_cast<std::uint32_t>(mesh.faces.size()));
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    Vec3 n = mesh.face_normal(f);
    const double len = n.norm();
    n = len > 0 ? Vec3(n / len) : Vec3::Zero();
    for (int i = 0; i < 3; ++i) put_f32(out, static_cast<float>(n[i]));
    for (std::uint32_t v : mesh.faces[f]) {
      for (int i = 0; i < 3; ++i) put_f32(out, static_cast<float>(mesh.vertices[v][i]));
    }
    out.append(2, '\0');
  }
  return out;
}

TriMesh parse_stl(const std::string& bytes) {
  if (bytes.size() < 84) throw Error(ErrorCode::kMalformedStl, "file shorter than the 84-byte header");
  std::uint32_t count = 0;
  std::memcpy(&count, bytes.data() + 80, 4);
  if (bytes.size() != 84 + 50ull * count) {
    throw Error(ErrorCode::kMalformedStl, "expected " + std::to_string(84 + 50ull * count) + " bytes for " +
                                              std::to_string(count) + " facets, got " + std::to_string(bytes.size()));
  }
  TriMesh mesh;
  std::map<std::array<float, 3>, std::uint32_t> index;
  const char* p = bytes.data() + 84;
  for (std::uint32_t f = 0; f < count; ++f, p += 50) {
    Face face;
    for (int k = 0; k < 3; ++k) {
      std::array<float, 3> c;
      std::memcpy(c.data(), p + 12 + 12 * k, 12);
      auto [it, inserted] = index.try_emplace(c, static_cast<std::uint32_t>(mesh.vertices.size()));
      if (inserted) mesh.vertices.emplace_back(c[0], c[1], c[2]);
      face[k] = it->second;
    }
    mesh.faces.push_back(face);
  }
  return mesh;
}

TriMesh stl_image(const TriMesh& mesh) {
  TriMesh rounded = mesh;
  for (Vec3& v : rounded.vertices) v = v.cast<float>().cast<double>();
  return weld_vertices(rounded, 0.0);
}

void export_stl(const TriMesh& mesh, const std::filesystem::path& path) {
  if (!is_solid(mesh)) throw Error(ErrorCode::kNotSolid, "refusing to export a non-solid mesh to " + path.string());
  const TriMesh image = stl_image(mesh);
  if (!is_solid(image)) {
    throw Error(ErrorCode::kNotSolid, "mesh is not solid at STL float precision: " + path.string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  const std::string bytes = stl_bytes(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

TriMesh import_stl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_stl(ss.str());
}

}  // namespace rodjoint
