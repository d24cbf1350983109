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
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "rodjoint/pipeline.hpp"

namespace rodjoint {

/// Results computed for one document revision.
struct RevisionCache {
  std::uint64_t revision = 0;
  DerivedData derived;
  std::map<std::string, nlohmann::json> responses;  // by op and level
};

struct SessionState {
  Document document;
  std::uint64_t revision = 0;
  PipelineOptions options;
  std::shared_ptr<const RevisionCache> cache;  // always matches revision when set

  /// Cache for the current revision, computing derived data on demand.
  const RevisionCache& current();
};

/// Handles one request object {"id", "op", "args"} and returns
/// {"id", "revision", "ok", "data" | "error"}. Ops: LoadDocument, ApplyEdit,
/// GetGeometry (level proxy | full), GetDiagnostics, GetCutPlan,
/// GetAssemblyPlan, ExportAll. An "args.revision" other than the current
/// one fails with StaleRevision. Never throws.
nlohmann::json handle_request(SessionState& state, const nlohmann::json& request);

/// Parses one line and handles it; malformed lines get an error response
/// with a null id.
nlohmann::json handle_line(SessionState& state, const std::string& line);

/// Serves newline-delimited requests until end of input.
void serve_stream(SessionState& state, std::istream& in, std::ostream& out);

/// Listens on 127.0.0.1:port and serves clients one after another. Stops
/// after `max_clients` connections when it is positive. `on_listening`
/// receives the bound port (useful with port 0).
void serve_tcp(SessionState& state, int port, int max_clients = 0,
               const std::function<void(int)>& on_listening = {});

/// Mesh payload: counts plus base64 of little-endian float64 xyz and
/// uint32 face indices.
nlohmann::json mesh_to_json(const TriMesh& mesh);
TriMesh mesh_from_json(const nlohmann::json& j);

std::string base64_encode(const std::string& bytes);
std::string base64_decode(const std::string& text);

}  // namespace rodjoint
