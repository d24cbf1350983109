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

#include "rodjoint/document.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace rodjoint {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidDocument, what); }

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
  if (!obj.is_object()) bad(std::string(where) + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) bad(std::string("unknown key '") + key + "' in " + where);
  }
}

double number(const json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

Vec3 vec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) bad(std::string(what) + " must be a 3-element array");
  return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

std::size_t index(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Selection selection(const json& j) {
  Selection s;
  if (!j.is_array()) bad("nodes must be an array");
  for (const auto& n : j) s.nodes.push_back(index(n, "node"));
  return s;
}

json selection_json(const Selection& s) { return json(s.nodes); }

ProfileSides profile_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "circular") bad("p must be an integer >= 3 or \"circular\"");
    return {};
  }
  if (!j.is_number_integer() || j.get<long long>() < 3) bad("p must be an integer >= 3 or \"circular\"");
  return {j.get<int>()};
}

json profile_json(const ProfileSides& p) { return p.circular() ? json("circular") : json(p.value); }

}  // namespace

FabricationParams params_from_json(const json& j) {
  only_keys(j, {"r", "p", "sigma", "h", "eps", "b", "pad", "wood_density", "plastic_density"}, "params");
  FabricationParams p;
  if (j.contains("r")) p.rod_radius = number(j["r"], "r");
  if (j.contains("p")) p.profile = profile_from_json(j["p"]);
  if (j.contains("sigma")) p.thickness = number(j["sigma"], "sigma");
  if (j.contains("h")) p.socket_length = number(j["h"], "h");
  if (j.contains("eps")) p.tolerance = number(j["eps"], "eps");
  if (j.contains("b")) p.stock_length = number(j["b"], "b");
  if (j.contains("pad")) p.stock_padding = number(j["pad"], "pad");
  if (j.contains("wood_density")) p.wood_density = number(j["wood_density"], "wood_density");
  if (j.contains("plastic_density")) p.plastic_density = number(j["plastic_density"], "plastic_density");
  try {
    p.check();
  } catch (const Error& e) {
    bad(e.what());
  }
  return p;
}

json params_to_json(const FabricationParams& p) {
  return {{"r", p.rod_radius},     {"p", profile_json(p.profile)}, {"sigma", p.thickness},
          {"h", p.socket_length},  {"eps", p.tolerance},           {"b", p.stock_length},
          {"pad", p.stock_padding}, {"wood_density", p.wood_density},
          {"plastic_density", p.plastic_density}};
}

Document document_from_json(const json& j) {
  only_keys(j, {"nodes", "edges", "params"}, "document");
  Document doc;
  if (!j.contains("nodes") || !j["nodes"].is_array()) bad("document needs a \"nodes\" array");
  for (const auto& n : j["nodes"]) doc.network.nodes.push_back(vec3(n, "node"));
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) bad("\"edges\" must be an array");
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2) bad("edge must be a 2-element array");
      doc.network.edges.push_back({index(e[0], "edge endpoint"), index(e[1], "edge endpoint")});
    }
  }
  if (j.contains("params")) doc.params = params_from_json(j["params"]);
  return doc;
}

json document_to_json(const Document& doc) {
  json nodes = json::array();
  for (const Vec3& n : doc.network.nodes) nodes.push_back(vec_json(n));
  json edges = json::array();
  for (const Edge& e : doc.network.edges) edges.push_back(json::array({e.a, e.b}));
  return {{"nodes", nodes}, {"edges", edges}, {"params", params_to_json(doc.params)}};
}

Document load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
  return document_from_json(j);
}

void save_document(const Document& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << document_to_json(doc).dump(2) << '\n';
}

EditCommand edit_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) bad("edit needs a \"type\"");
  const std::string type = j["type"];
  if (type == "TranslateSelection") {
    only_keys(j, {"type", "nodes", "delta"}, type.c_str());
    return TranslateSelection{selection(j.at("nodes")), vec3(j.at("delta"), "delta")};
  }
  if (type == "RotateSelection") {
    only_keys(j, {"type", "nodes", "axis", "angle", "pivot"}, type.c_str());
    RotateSelection c{selection(j.at("nodes")), vec3(j.at("axis"), "axis"), number(j.at("angle"), "angle")};
    if (j.contains("pivot")) c.pivot = vec3(j["pivot"], "pivot");
    return c;
  }
  if (type == "ScaleSelection") {
    only_keys(j, {"type", "nodes", "factor", "pivot"}, type.c_str());
    ScaleSelection c{selection(j.at("nodes")), number(j.at("factor"), "factor")};
    if (j.contains("pivot")) c.pivot = vec3(j["pivot"], "pivot");
    return c;
  }
  if (type == "ConnectSelected") {
    only_keys(j, {"type", "nodes"}, type.c_str());
    return ConnectSelected{selection(j.at("nodes"))};
  }
  if (type == "SplitEdge") {
    only_keys(j, {"type", "edge"}, type.c_str());
    const json& e = j.at("edge");
    if (!e.is_array() || e.size() != 2) bad("edge must be a 2-element array");
    return SplitEdge{{index(e[0], "edge endpoint"), index(e[1], "edge endpoint")}};
  }
  if (type == "SetRadius" || type == "SetThickness" || type == "SetSocketLength") {
    only_keys(j, {"type", "value"}, type.c_str());
    const double v = number(j.at("value"), "value");
    if (type == "SetRadius") return SetRadius{v};
    if (type == "SetThickness") return SetThickness{v};
    return SetSocketLength{v};
  }
  if (type == "SetProfileSides") {
    only_keys(j, {"type", "value"}, type.c_str());
    return SetProfileSides{profile_from_json(j.at("value"))};
  }
  bad("unknown edit type '" + type + "'");
}

json edit_to_json(const EditCommand& cmd) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, TranslateSelection>) {
          return {{"type", "TranslateSelection"}, {"nodes", selection_json(c.selection)}, {"delta", vec_json(c.delta)}};
        } else if constexpr (std::is_same_v<T, RotateSelection>) {
          return {{"type", "RotateSelection"}, {"nodes", selection_json(c.selection)}, {"axis", vec_json(c.axis)},
                  {"angle", c.angle}, {"pivot", vec_json(c.pivot)}};
        } else if constexpr (std::is_same_v<T, ScaleSelection>) {
          return {{"type", "ScaleSelection"}, {"nodes", selection_json(c.selection)}, {"factor", c.factor},
                  {"pivot", vec_json(c.pivot)}};
        } else if constexpr (std::is_same_v<T, ConnectSelected>) {
          return {{"type", "ConnectSelected"}, {"nodes", selection_json(c.selection)}};
        } else if constexpr (std::is_same_v<T, SplitEdge>) {
          return {{"type", "SplitEdge"}, {"edge", json::array({c.edge.a, c.edge.b})}};
        } else if constexpr (std::is_same_v<T, SetRadius>) {
          return {{"type", "SetRadius"}, {"value", c.value}};
        } else if constexpr (std::is_same_v<T, SetThickness>) {
          return {{"type", "SetThickness"}, {"value", c.value}};
        } else if constexpr (std::is_same_v<T, SetSocketLength>) {
          return {{"type", "SetSocketLength"}, {"value", c.value}};
        } else {
          return {{"type", "SetProfileSides"}, {"value", profile_json(c.value)}};
        }
      },
      cmd);
}

}  // namespace rodjoint
