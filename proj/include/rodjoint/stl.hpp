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
#include <string>

#include "rodjoint/mesh.hpp"

namespace rodjoint {

/// Binary STL bytes: 80-byte header, little-endian facet count, then 50
/// bytes per facet with the normal recomputed from the winding.
std::string stl_bytes(const TriMesh& mesh, const std::string& header = "rodjoint");

/// Parses binary STL and welds bit-identical corners into shared vertices.
TriMesh parse_stl(const std::string& bytes);

/// The mesh as a binary STL stores it: float32 coordinates with vertices
/// that round together welded.
TriMesh stl_image(const TriMesh& mesh);

/// Writes stl_image(mesh). Throws kNotSolid when the mesh or its image is
/// not solid and kIoError on write failures.
void export_stl(const TriMesh& mesh, const std::filesystem::path& path);
/// Throws kIoError or kMalformedStl.
TriMesh import_stl(const std::filesystem::path& path);

}  // namespace rodjoint
