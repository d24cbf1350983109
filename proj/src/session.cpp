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

#include "rodjoint/session.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <istream>
#include <ostream>

#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/binary_from_base64.hpp>
#include <boost/archive/iterators/transform_width.hpp>

#include "rodjoint/document.hpp"

namespace rodjoint {

using nlohmann::json;

namespace {

json error_json(const Error& e) {
  const std::string what = e.what();
  const std::size_t prefix = error_code_name(e.code()).size() + 2;
  return {{"code", error_code_name(e.code())}, {"message", what.substr(std::min(prefix, what.size()))}};
}

json placement_json(const Affine& a) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    rows.push_back({a.linear(r, 0), a.linear(r, 1), a.linear(r, 2), a.translation(r)});
  }
  return rows;
}

// Measurements shared by both geometry levels.
json edges_json(const DerivedData& derived) {
  json out = json::array();
  for (EdgeId e = 0; e < derived.edges.size(); ++e) {
    const DerivedEdge& d = derived.edges[e];
    json item = {{"edge", e},
                 {"tip", d.frame.tip},
                 {"tail", d.frame.tail},
                 {"usable", d.usable()},
                 {"swallowed", d.swallowed},
                 {"degenerate_angle", d.degenerate_angle},
                 {"degenerate_length", d.degenerate_length}};
    if (!d.degenerate_length && !d.degenerate_angle) {
      item["length"] = d.rod_length;
      item["offset_tip"] = d.offset_tip;
      item["offset_tail"] = d.offset_tail;
      item["placement"] = placement_json(d.placement);
    }
    out.push_back(std::move(item));
  }
  return out;
}

json rods_json(const EdgeNetwork& net, const FabricationParams& params, const DerivedData& derived) {
  json rods = json::array();
  for (EdgeId e = 0; e < derived.edges.size(); ++e) {
    if (!derived.edges[e].usable()) continue;
    rods.push_back({{"edge", e}, {"mesh", mesh_to_json(rod_solid(net, params, derived, e))}});
  }
  return rods;
}

json geometry_json(const Document& doc, const DerivedData& derived, bool full) {
  const EdgeNetwork& net = doc.network;
  json joints = json::array();
  if (full) {
    // Per-joint failures are reported in place so one bad node does not
    // hide the rest.
    for (NodeId n = 0; n < net.nodes.size(); ++n) {
      if (net.incident_edges(n).empty()) continue;
      json item = {{"node", n}, {"id", node_label(n)}};
      try {
        item["mesh"] = mesh_to_json(build_joint(net, doc.params, derived, n).mesh);
      } catch (const Error& e) {
        item["error"] = error_json(e);
      }
      joints.push_back(std::move(item));
    }
  } else {
    for (NodeId n = 0; n < net.nodes.size(); ++n) {
      if (net.incident_edges(n).empty()) continue;
      json item = {{"node", n}, {"id", node_label(n)}};
      try {
        json parts = json::array();
        for (const TriMesh& m : joint_proxy(net, doc.params, derived, n)) parts.push_back(mesh_to_json(m));
        item["parts"] = std::move(parts);
      } catch (const Error& e) {
        item["error"] = error_json(e);
      }
      joints.push_back(std::move(item));
    }
  }
  return {{"level", full ? "full" : "proxy"},
          {"edges", edges_json(derived)},
          {"joints", std::move(joints)},
          {"rods", rods_json(net, doc.params, derived)}};
}

json cut_plan_json(const CutPlan& plan, const PipelineOptions& options, double diameter) {
  json bins = json::array();
  for (const CutBin& bin : plan.bins) {
    json pieces = json::array();
    for (const CutPiece& p : bin.pieces) pieces.push_back({{"edge", p.edge}, {"length", p.length}});
    bins.push_back({{"pieces", std::move(pieces)}, {"used", bin.used()}});
  }
  return {{"bins", std::move(bins)},
          {"stock_length", plan.stock_length},
          {"padding", plan.padding},
          {"kerf", plan.kerf},
          {"waste", plan.waste_total},
          {"svg", cutplan_svg(plan, options.jig_pitch, diameter)},
          {"text", cutplan_text(plan)}};
}

const json& args_of(const json& request) {
  static const json kEmpty = json::object();
  auto it = request.find("args");
  if (it == request.end() || it->is_null()) return kEmpty;
  if (!it->is_object()) throw Error(ErrorCode::kInvalidArgument, "args must be an object");
  return *it;
}

}  // namespace

const RevisionCache& SessionState::current() {
  if (!cache || cache->revision != revision) {
    auto fresh = std::make_shared<RevisionCache>();
    fresh->revision = revision;
    fresh->derived = derive(document.network, document.params);
    cache = std::move(fresh);
  }
  return *cache;
}

json handle_request(SessionState& state, const json& request) {
  json response = {{"id", request.is_object() && request.contains("id") ? request["id"] : json(nullptr)}};
  try {
    if (!request.is_object()) throw Error(ErrorCode::kInvalidArgument, "request must be an object");
    auto op_it = request.find("op");
    if (op_it == request.end() || !op_it->is_string()) throw Error(ErrorCode::kInvalidArgument, "missing op");
    const std::string op = *op_it;
    const json& args = args_of(request);
    if (args.contains("revision")) {
      const auto& pinned = args["revision"];
      if (!pinned.is_number_unsigned() || pinned.get<std::uint64_t>() != state.revision) {
        throw Error(ErrorCode::kStaleRevision, "request pins revision " + pinned.dump() + ", current is " +
                                                   std::to_string(state.revision));
      }
    }

    json data;
    if (op == "LoadDocument") {
      Document doc;
      if (args.contains("document")) {
        doc = document_from_json(args["document"]);
      } else if (args.contains("path") && args["path"].is_string()) {
        doc = load_document(args["path"].get<std::string>());
      } else {
        throw Error(ErrorCode::kInvalidArgument, "LoadDocument needs document or path");
      }
      state.document = std::move(doc);
      ++state.revision;
      data = {{"document", document_to_json(state.document)}};
    } else if (op == "GetDocument") {
      data = {{"document", document_to_json(state.document)}};
    } else if (op == "ApplyEdit") {
      if (!args.contains("edit")) throw Error(ErrorCode::kInvalidArgument, "ApplyEdit needs edit");
      EditResult result = apply_edit(state.document, edit_from_json(args["edit"]));
      state.document = std::move(result.document);
      ++state.revision;
      data = {{"warnings", result.warnings}, {"document", document_to_json(state.document)}};
    } else if (op == "ExportAll") {
      if (!args.contains("dir") || !args["dir"].is_string()) throw Error(ErrorCode::kInvalidArgument, "missing dir");
      const std::string dir = args["dir"];
      const PipelineResult result = run_all(state.document, state.options, dir);
      data = {{"dir", dir}, {"joints", result.joints.size()}, {"bins", result.cut_plan.bins_used()},
              {"steps", result.assembly.steps.size()}, {"feasible", result.diagnostics.feasible()}};
    } else {
      std::string key = op;
      if (op == "GetGeometry") {
        const std::string level = args.value("level", std::string("proxy"));
        if (level != "proxy" && level != "full") throw Error(ErrorCode::kInvalidArgument, "level must be proxy or full");
        key += ":" + level;
      } else if (op != "GetDiagnostics" && op != "GetCutPlan" && op != "GetAssemblyPlan") {
        throw Error(ErrorCode::kInvalidArgument, "unknown op '" + op + "'");
      }
      const RevisionCache& cache = state.current();
      auto hit = cache.responses.find(key);
      if (hit != cache.responses.end()) {
        data = hit->second;
      } else {
        const Document& doc = state.document;
        if (op == "GetGeometry") {
          data = geometry_json(doc, cache.derived, key.ends_with("full"));
        } else if (op == "GetDiagnostics") {
          data = diagnostics_to_json(diagnose(doc.network, doc.params));
        } else if (op == "GetCutPlan") {
          const CutPlan plan = plan_cuts(doc.network, doc.params, cache.derived, state.options.pack);
          data = cut_plan_json(plan, state.options, 2.0 * doc.params.rod_radius);
        } else {
          data = assembly_to_json(assembly_order(doc.network), cache.derived);
        }
        // Caches are immutable once published; store into a copy.
        auto next = std::make_shared<RevisionCache>(cache);
        next->responses.emplace(key, data);
        state.cache = std::move(next);
      }
    }
    response["revision"] = state.revision;
    response["ok"] = true;
    response["data"] = std::move(data);
  } catch (const Error& e) {
    response["revision"] = state.revision;
    response["ok"] = false;
    response["error"] = error_json(e);
  } catch (const std::exception& e) {
    response["revision"] = state.revision;
    response["ok"] = false;
    response["error"] = {{"code", "InvalidArgument"}, {"message", e.what()}};
  }
  return response;
}

json handle_line(SessionState& state, const std::string& line) {
  json request;
  try {
    request = json::parse(line);
  } catch (const json::parse_error& e) {
    return {{"id", nullptr},
            {"revision", state.revision},
            {"ok", false},
            {"error", {{"code", "InvalidArgument"}, {"message", std::string("malformed request: ") + e.what()}}}};
  }
  return handle_request(state, request);
}

void serve_stream(SessionState& state, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << handle_line(state, line).dump() << '\n' << std::flush;
  }
}

void serve_tcp(SessionState& state, int port, int max_clients, const std::function<void(int)>& on_listening) {
  const int server = ::socket(AF_INET, SOCK_STREAM, 0);
  if (server < 0) throw Error(ErrorCode::kIoError, std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(server, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::bind(server, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(server, 4) < 0) {
    const std::string msg = std::strerror(errno);
    ::close(server);
    throw Error(ErrorCode::kIoError, "cannot listen on port " + std::to_string(port) + ": " + msg);
  }
  socklen_t len = sizeof addr;
  ::getsockname(server, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listening) on_listening(ntohs(addr.sin_port));

  for (int served = 0; max_clients <= 0 || served < max_clients; ++served) {
    const int client = ::accept(server, nullptr, nullptr);
    if (client < 0) continue;
    std::string pending;
    char buf[65536];
    for (;;) {
      const ssize_t n = ::recv(client, buf, sizeof buf, 0);
      if (n <= 0) break;
      pending.append(buf, static_cast<std::size_t>(n));
      std::size_t nl;
      bool open = true;
      while (open && (nl = pending.find('\n')) != std::string::npos) {
        const std::string line = pending.substr(0, nl);
        pending.erase(0, nl + 1);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string reply = handle_line(state, line).dump() + "\n";
        for (std::size_t sent = 0; sent < reply.size();) {
          const ssize_t k = ::send(client, reply.data() + sent, reply.size() - sent, MSG_NOSIGNAL);
          if (k <= 0) {
            open = false;
            break;
          }
          sent += static_cast<std::size_t>(k);
        }
      }
      if (!open) break;
    }
    ::close(client);
  }
  ::close(server);
}

std::string base64_encode(const std::string& bytes) {
  using namespace boost::archive::iterators;
  using It = base64_from_binary<transform_width<std::string::const_iterator, 6, 8>>;
  std::string out(It(bytes.begin()), It(bytes.end()));
  out.append((3 - bytes.size() % 3) % 3, '=');
  return out;
}

std::string base64_decode(const std::string& text) {
  using namespace boost::archive::iterators;
  using It = transform_width<binary_from_base64<std::string::const_iterator>, 8, 6>;
  std::string body = text;
  std::size_t pad = 0;
  while (!body.empty() && body.back() == '=') {
    body.pop_back();
    ++pad;
  }
  if (pad > 2 || (body.size() + pad) % 4 != 0) throw Error(ErrorCode::kInvalidArgument, "bad base64 length");
  try {
    std::string out(It(body.begin()), It(body.end()));
    // transform_width emits the partial trailing group; drop it.
    out.resize((body.size() + pad) / 4 * 3 - pad);
    return out;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad base64 character");
  }
}

json mesh_to_json(const TriMesh& mesh) {
  std::string verts(mesh.vertices.size() * 3 * sizeof(double), '\0');
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    std::memcpy(&verts[i * 3 * sizeof(double)], mesh.vertices[i].data(), 3 * sizeof(double));
  }
  std::string faces(mesh.faces.size() * 3 * sizeof(std::uint32_t), '\0');
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    std::memcpy(&faces[f * 3 * sizeof(std::uint32_t)], mesh.faces[f].data(), 3 * sizeof(std::uint32_t));
  }
  return {{"vertex_count", mesh.vertices.size()},
          {"face_count", mesh.faces.size()},
          {"vertices", base64_encode(verts)},
          {"faces", base64_encode(faces)}};
}

TriMesh mesh_from_json(const json& j) {
  const std::size_t nv = j.at("vertex_count").get<std::size_t>();
  const std::size_t nf = j.at("face_count").get<std::size_t>();
  const std::string verts = base64_decode(j.at("vertices").get<std::string>());
  const std::string faces = base64_decode(j.at("faces").get<std::string>());
  if (verts.size() != nv * 3 * sizeof(double) || faces.size() != nf * 3 * sizeof(std::uint32_t)) {
    throw Error(ErrorCode::kInvalidArgument, "mesh payload size does not match its counts");
  }
  TriMesh mesh;
  mesh.vertices.resize(nv);
  mesh.faces.resize(nf);
  for (std::size_t i = 0; i < nv; ++i) std::memcpy(mesh.vertices[i].data(), &verts[i * 3 * sizeof(double)], 24);
  for (std::size_t f = 0; f < nf; ++f) std::memcpy(mesh.faces[f].data(), &faces[f * 12], 12);
  for (const Face& face : mesh.faces) {
    for (std::uint32_t v : face) {
      if (v >= nv) throw Error(ErrorCode::kInvalidArgument, "face index out of range");
    }
  }
  return mesh;
}

}  // namespace rodjoint
