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

// Python bindings. Documents, diagnostics and session messages cross the
// boundary as JSON text; meshes as numpy arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "rodjoint/assembly.hpp"
#include "rodjoint/document.hpp"
#include "rodjoint/engraver.hpp"
#include "rodjoint/fabrication.hpp"
#include "rodjoint/feasibility.hpp"
#include "rodjoint/joint.hpp"
#include "rodjoint/mesh.hpp"
#include "rodjoint/pipeline.hpp"
#include "rodjoint/session.hpp"
#include "rodjoint/stl.hpp"

namespace py = pybind11;
using namespace rodjoint;

namespace {

using Vertices = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Faces = py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast>;

Document parse_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidDocument, e.what());
  }
  return document_from_json(j);
}

py::tuple mesh_to_arrays(const TriMesh& mesh) {
  Vertices v({static_cast<py::ssize_t>(mesh.vertices.size()), py::ssize_t{3}});
  Faces f({static_cast<py::ssize_t>(mesh.faces.size()), py::ssize_t{3}});
  auto vv = v.mutable_unchecked<2>();
  auto ff = f.mutable_unchecked<2>();
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    for (int k = 0; k < 3; ++k) vv(i, k) = mesh.vertices[i][k];
  }
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    for (int k = 0; k < 3; ++k) ff(i, k) = mesh.faces[i][static_cast<std::size_t>(k)];
  }
  return py::make_tuple(v, f);
}

TriMesh mesh_from_arrays(const Vertices& v, const Faces& f) {
  if (v.ndim() != 2 || v.shape(1) != 3 || f.ndim() != 2 || f.shape(1) != 3) {
    throw Error(ErrorCode::kInvalidArgument, "vertices and faces must have shape (n, 3)");
  }
  TriMesh mesh;
  auto vv = v.unchecked<2>();
  auto ff = f.unchecked<2>();
  for (py::ssize_t i = 0; i < v.shape(0); ++i) mesh.vertices.emplace_back(vv(i, 0), vv(i, 1), vv(i, 2));
  for (py::ssize_t i = 0; i < f.shape(0); ++i) {
    const Face face{ff(i, 0), ff(i, 1), ff(i, 2)};
    for (std::uint32_t idx : face) {
      if (idx >= mesh.vertices.size()) throw Error(ErrorCode::kIndexOutOfRange, "face index out of range");
    }
    mesh.faces.push_back(face);
  }
  return mesh;
}

std::string derived_json(const std::string& document) {
  const Document doc = parse_document(document);
  const DerivedData d = derive(doc.network, doc.params);
  nlohmann::json edges = nlohmann::json::array();
  for (EdgeId e = 0; e < d.edges.size(); ++e) {
    const DerivedEdge& x = d.edges[e];
    edges.push_back({{"edge", e},
                     {"tip", x.frame.tip},
                     {"tail", x.frame.tail},
                     {"offset_tip", x.offset_tip},
                     {"offset_tail", x.offset_tail},
                     {"rod_length", x.rod_length},
                     {"swallowed", x.swallowed},
                     {"degenerate", x.degenerate_length || x.degenerate_angle}});
  }
  return edges.dump();
}

py::tuple joint_mesh(const std::string& document, NodeId node) {
  const Document doc = parse_document(document);
  if (node >= doc.network.nodes.size()) throw Error(ErrorCode::kIndexOutOfRange, "no such node");
  const DerivedData d = derive(doc.network, doc.params);
  return mesh_to_arrays(build_joint(doc.network, doc.params, d, node).mesh);
}

py::tuple engrave(const Vertices& v, const Faces& f, const std::string& id, double depth, std::uint64_t seed,
                  int samples, int k, int rays) {
  EngraveParams params;
  params.id = id;
  params.text_depth = depth;
  params.seed = seed;
  params.sample_count = samples;
  params.k_neighbors = k;
  params.ao_rays = rays;
  const TriMesh mesh = mesh_from_arrays(v, f);
  EngraveResult result;
  {
    py::gil_scoped_release release;
    result = place_engraving(mesh, params);
  }
  const SurfaceSample& w = result.site.samples[result.site.winner];
  py::dict site;
  site["winner"] = result.site.winner;
  site["score"] = w.score;
  site["radius"] = result.site.radius;
  site["position"] = std::vector<double>{w.position.x(), w.position.y(), w.position.z()};
  site["normal"] = std::vector<double>{w.normal.x(), w.normal.y(), w.normal.z()};
  return py::make_tuple(mesh_to_arrays(result.mesh), site);
}

std::vector<std::vector<std::pair<EdgeId, double>>> pack(const std::vector<double>& lengths, double stock_length,
                                                         double padding, double kerf, int restarts,
                                                         std::uint64_t seed) {
  PackOptions opt;
  opt.stock_length = stock_length;
  opt.padding = padding;
  opt.kerf = kerf;
  opt.restarts = restarts;
  opt.seed = seed;
  std::vector<std::vector<std::pair<EdgeId, double>>> bins;
  for (const CutBin& bin : pack_cuts(lengths, opt).bins) {
    auto& out = bins.emplace_back();
    for (const CutPiece& p : bin.pieces) out.emplace_back(p.edge, p.length);
  }
  return bins;
}

std::vector<std::pair<std::string, std::size_t>> assembly_steps(const std::string& document,
                                                                std::optional<NodeId> start) {
  const Document doc = parse_document(document);
  std::vector<std::pair<std::string, std::size_t>> steps;
  for (const AssemblyStep& s : assembly_order(doc.network, start).steps) {
    steps.emplace_back(s.kind == StepKind::kPlaceJoint ? "joint" : "rod", s.part);
  }
  return steps;
}

std::string diagnostics(const std::string& document) {
  const Document doc = parse_document(document);
  Diagnostics d;
  {
    py::gil_scoped_release release;
    d = diagnose(doc.network, doc.params);
  }
  return diagnostics_to_json(d).dump();
}

void export_all(const std::string& document, const std::string& out_dir, std::uint64_t seed,
                std::uint64_t engrave_seed, bool engrave_ids, unsigned threads) {
  const Document doc = parse_document(document);
  PipelineOptions options;
  options.pack = pack_options_for(doc.params, options.pack);
  options.pack.seed = seed;
  options.engrave.seed = engrave_seed;
  options.engrave_ids = engrave_ids;
  options.threads = threads;
  py::gil_scoped_release release;
  run_all(doc, options, out_dir);
}

class Session {
 public:
  std::string handle(const std::string& line) { return handle_line(state_, line).dump(); }
  std::uint64_t revision() const { return state_.revision; }

 private:
  SessionState state_;
};

}  // namespace

PYBIND11_MODULE(_rodjoint, m) {
  m.doc() = "Rod-and-joint fabrication kernel.";

  static const py::handle error_type = py::exception<Error>(m, "RodjointError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = error_type(e.what());
      err.attr("code") = std::string(error_code_name(e.code()));
      PyErr_SetObject(error_type.ptr(), err.ptr());
    }
  });

  m.def("safe_offset", &safe_offset, py::arg("c"), py::arg("r_eff"),
        "Socket offset r_eff * sqrt((1 + c) / (1 - c)); zero when c is None.");
  m.def(
      "normalize_document", [](const std::string& text) { return document_to_json(parse_document(text)).dump(); },
      py::arg("document"), "Validates a document and returns it with every parameter filled in.");
  m.def("derive", &derived_json, py::arg("document"), "Per-edge offsets and rod lengths as JSON.");
  m.def("build_joint", &joint_mesh, py::arg("document"), py::arg("node"),
        "Joint solid of one node as (vertices, faces).");
  m.def("engrave", &engrave, py::arg("vertices"), py::arg("faces"), py::arg("id"), py::arg("depth"),
        py::arg("seed") = 1, py::arg("samples") = 10000, py::arg("k") = 200, py::arg("ao_rays") = 64,
        "Engraves a two-digit id; returns ((vertices, faces), site).");
  m.def(
      "volume", [](const Vertices& v, const Faces& f) { return signed_volume(mesh_from_arrays(v, f)); },
      py::arg("vertices"), py::arg("faces"));
  m.def(
      "is_solid", [](const Vertices& v, const Faces& f) { return is_solid(mesh_from_arrays(v, f)); },
      py::arg("vertices"), py::arg("faces"));
  m.def(
      "stl_bytes", [](const Vertices& v, const Faces& f) { return py::bytes(stl_bytes(mesh_from_arrays(v, f))); },
      py::arg("vertices"), py::arg("faces"));
  m.def("pack_cuts", &pack, py::arg("lengths"), py::arg("stock_length") = 1000.0, py::arg("padding") = 10.0,
        py::arg("kerf") = 0.0, py::arg("restarts") = 200, py::arg("seed") = 1,
        "Bins of (edge, length) in cut order.");
  m.def("assembly_order", &assembly_steps, py::arg("document"), py::arg("start") = py::none());
  m.def("diagnose", &diagnostics, py::arg("document"), "Feasibility diagnostics as JSON.");
  m.def("export_all", &export_all, py::arg("document"), py::arg("out_dir"), py::arg("seed") = 1,
        py::arg("engrave_seed") = 1, py::arg("engrave_ids") = true, py::arg("threads") = 0);

  py::class_<Session>(m, "Session")
      .def(py::init<>())
      .def("handle", &Session::handle, py::arg("request"), "Handles one JSON request line.")
      .def_property_readonly("revision", &Session::revision);
}
