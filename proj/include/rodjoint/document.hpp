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

#include <nlohmann/json.hpp>

#include "rodjoint/network.hpp"

namespace rodjoint {

// Edge-network documents:
//   {"nodes":[[x,y,z],...], "edges":[[i,j],...],
//    "params":{"r":..,"p":..|"circular","sigma":..,"h":..,"eps":..,
//              "b":..,"pad":..,"wood_density":..,"plastic_density":..}}
// Unknown keys anywhere in the document are rejected with kInvalidDocument.
// Missing parameter keys keep their defaults.

Document document_from_json(const nlohmann::json& j);
nlohmann::json document_to_json(const Document& doc);

Document load_document(const std::filesystem::path& path);
void save_document(const Document& doc, const std::filesystem::path& path);

nlohmann::json params_to_json(const FabricationParams& params);
FabricationParams params_from_json(const nlohmann::json& j);

/// Edit commands on the wire: {"type":"SplitEdge","edge":[i,j]},
/// {"type":"TranslateSelection","nodes":[..],"delta":[dx,dy,dz]}, ...
EditCommand edit_from_json(const nlohmann::json& j);
nlohmann::json edit_to_json(const EditCommand& cmd);

}  // namespace rodjoint
