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

#include "rodjoint/engraver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_map>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <boost/iterator/function_output_iterator.hpp>

#include "rodjoint/boolean.hpp"
#include "rodjoint/intersect.hpp"

namespace rodjoint {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

using BPoint = bg::model::point<double, 3, bg::cs::cartesian>;
using BBox = bg::model::box<BPoint>;

constexpr double kWeightDelta = 1e-6;
constexpr double kRayLift = 1e-4;
constexpr double kFlatDihedral = 1e-9;

BPoint bp(const Vec3& v) { return BPoint(v.x(), v.y(), v.z()); }

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

// Seven-segment layout: a top, b upper right, c lower right, d bottom,
// e lower left, f upper left, g middle.
constexpr std::array<const char*, 10> kDigitSegments = {"abcdef", "bc",     "abged",   "abgcd", "fgbc",
                                                        "afgcd",  "afgecd", "abc",     "abcdefg", "abcdfg"};

}  // namespace

void EngraveParams::check() const {
  if (!(sample_count > k_neighbors && k_neighbors >= 2)) {
    throw Error(ErrorCode::kInvalidArgument, "need sample_count > k_neighbors >= 2");
  }
  if (ao_rays < 8) throw Error(ErrorCode::kInvalidArgument, "need at least 8 occlusion rays");
  if (!(text_depth > 0)) throw Error(ErrorCode::kInvalidArgument, "text depth must be positive");
  if (id.empty() || !std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorCode::kInvalidArgument, "engraving id must be digits");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index + 1));
}

std::vector<SurfaceSample> sample_surface(const TriMesh& mesh, int n, std::uint64_t seed) {
  std::vector<SurfaceSample> out;
  if (n <= 0 || mesh.faces.empty()) return out;
  std::vector<double> cumulative(mesh.faces.size());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    total += mesh.face_area(f);
    cumulative[f] = total;
  }
  std::mt19937_64 rng(seed);
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double pick = unit_double(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const auto f = static_cast<std::uint32_t>(it - cumulative.begin());
    const double r1 = std::sqrt(unit_double(rng));
    const double r2 = unit_double(rng);
    const Face& face = mesh.faces[f];
    const Vec3& a = mesh.vertices[face[0]];
    const Vec3& b = mesh.vertices[face[1]];
    const Vec3& c = mesh.vertices[face[2]];
    SurfaceSample s;
    s.position = (1.0 - r1) * a + r1 * (1.0 - r2) * b + r1 * r2 * c;
    s.normal = mesh.face_normal(f).normalized();
    s.face = f;
    out.push_back(s);
  }
  return out;
}

std::vector<double> nearest_edge_dihedrals(const TriMesh& mesh, const std::vector<SurfaceSample>& samples) {
  // Undirected edges with their two faces.
  std::unordered_map<std::uint64_t, std::array<std::int64_t, 2>> faces_of;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      std::uint32_t a = mesh.faces[f][k], b = mesh.faces[f][(k + 1) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = faces_of.try_emplace((std::uint64_t{a} << 32) | b, std::array<std::int64_t, 2>{-1, -1});
      (it->second[0] < 0 ? it->second[0] : it->second[1]) = static_cast<std::int64_t>(f);
    }
  }
  struct EdgeInfo {
    Vec3 a, b;
    double dihedral;
  };
  std::vector<EdgeInfo> edges;
  std::vector<std::pair<BBox, std::size_t>> boxes;
  for (const auto& [key, fs] : faces_of) {
    const Vec3& a = mesh.vertices[key >> 32];
    const Vec3& b = mesh.vertices[key & 0xffffffffu];
    double angle = 0.0;
    if (fs[1] >= 0) {
      const Vec3 n1 = mesh.face_normal(static_cast<std::size_t>(fs[0]));
      const Vec3 n2 = mesh.face_normal(static_cast<std::size_t>(fs[1]));
      angle = std::atan2(n1.cross(n2).norm(), n1.dot(n2));
      if (angle < kFlatDihedral) angle = 0.0;
    }
    boxes.emplace_back(BBox(bp(a.cwiseMin(b)), bp(a.cwiseMax(b))), edges.size());
    edges.push_back({a, b, angle});
  }
  // Hash-map iteration order is not portable; make the index order canonical.
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& ex = edges[x];
    const auto& ey = edges[y];
    return std::lexicographical_compare(ex.a.data(), ex.a.data() + 3, ey.a.data(), ey.a.data() + 3) ||
           (ex.a == ey.a && std::lexicographical_compare(ex.b.data(), ex.b.data() + 3, ey.b.data(), ey.b.data() + 3));
  });
  std::vector<std::size_t> rank(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  const bgi::rtree<std::pair<BBox, std::size_t>, bgi::rstar<16>> tree(boxes.begin(), boxes.end());
  std::vector<double> out(samples.size(), 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Vec3& p = samples[i].position;
    const BPoint q = bp(p);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_edge = 0;
    auto consider = [&](const std::pair<BBox, std::size_t>& v) {
      const EdgeInfo& e = edges[v.second];
      const double d = segment_distance(p, e.a, e.b);
      if (d < best || (d == best && rank[v.second] < rank[best_edge])) {
        best = d;
        best_edge = v.second;
      }
    };
    // A few box-nearest edges bound the answer; every closer edge has its
    // box inside the query cube.
    tree.query(bgi::nearest(q, 4), boost::make_function_output_iterator(consider));
    if (std::isfinite(best)) {
      const Vec3 reach = Vec3::Constant(best);
      tree.query(bgi::intersects(BBox(bp(p - reach), bp(p + reach))), boost::make_function_output_iterator(consider));
    }
    out[i] = edges.empty() ? 0.0 : edges[best_edge].dihedral;
  }
  return out;
}

std::vector<double> curvature_scores(const TriMesh& mesh, const std::vector<SurfaceSample>& samples, int k,
                                     std::vector<double>* radius_out) {
  const std::vector<double> dihedral = nearest_edge_dihedrals(mesh, samples);
  std::vector<std::pair<BPoint, std::size_t>> pts;
  pts.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) pts.emplace_back(bp(samples[i].position), i);
  const bgi::rtree<std::pair<BPoint, std::size_t>, bgi::rstar<16>> tree(pts.begin(), pts.end());

  std::vector<double> out(samples.size(), 0.0);
  if (radius_out) radius_out->assign(samples.size(), 0.0);
  std::vector<std::pair<double, std::size_t>> found;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    found.clear();
    tree.query(bgi::nearest(pts[i].first, static_cast<unsigned>(k + 1)), boost::make_function_output_iterator(
                   [&](const std::pair<BPoint, std::size_t>& v) {
                     if (v.second != i) {
                       found.emplace_back((samples[v.second].position - samples[i].position).norm(), v.second);
                     }
                   }));
    // The tree may return neighbors in any order; sort for a stable sum.
    std::sort(found.begin(), found.end());
    if (found.size() > static_cast<std::size_t>(k)) found.resize(static_cast<std::size_t>(k));
    double num = 0.0, den = 0.0, far = 0.0;
    for (const auto& [d, j] : found) {
      const double w = 1.0 / (d + kWeightDelta);
      num += w * dihedral[j];
      den += w;
      far = std::max(far, d);
    }
    out[i] = den > 0 ? num / den : 0.0;
    if (radius_out) (*radius_out)[i] = far;
  }
  return out;
}

std::vector<double> occlusion_scores(const TriMesh& mesh, const std::vector<SurfaceSample>& samples, int rays,
                                     std::uint64_t seed) {
  const AabbTree tree = AabbTree::of_faces(mesh);
  std::vector<double> out(samples.size(), 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SurfaceSample& s = samples[i];
    // Tangent frame from the sample's triangle, so rays move with the mesh.
    const Face& f = mesh.faces[s.face];
    const Vec3 t = (mesh.vertices[f[1]] - mesh.vertices[f[0]]).normalized();
    const Vec3 b = s.normal.cross(t);
    const Vec3 origin = s.position + kRayLift * s.normal;
    std::mt19937_64 rng(derive_seed(seed, i));
    int hits = 0;
    for (int r = 0; r < rays; ++r) {
      const double u1 = unit_double(rng);
      const double phi = 2.0 * std::numbers::pi * unit_double(rng);
      const double sr = std::sqrt(u1);
      const Vec3 dir = sr * std::cos(phi) * t + sr * std::sin(phi) * b + std::sqrt(1.0 - u1) * s.normal;
      if (ray_occluded(mesh, tree, origin, dir, 0.0)) ++hits;
    }
    out[i] = static_cast<double>(hits) / rays;
  }
  return out;
}

EngravingSite select_site(const TriMesh& mesh, const EngraveParams& params) {
  params.check();
  EngravingSite site;
  site.samples = sample_surface(mesh, params.sample_count, params.seed);
  if (site.samples.empty()) throw Error(ErrorCode::kEngraveFailure, "mesh has no surface");
  std::vector<double> radius;
  const std::vector<double> curv = curvature_scores(mesh, site.samples, params.k_neighbors, &radius);
  const std::vector<double> occ = occlusion_scores(mesh, site.samples, params.ao_rays, params.seed);
  auto normalize = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    std::vector<double> out(v.size(), 0.0);
    if (*hi > *lo) {
      for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / (*hi - *lo);
    }
    return out;
  };
  const std::vector<double> nc = normalize(curv);
  const std::vector<double> no = normalize(occ);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < site.samples.size(); ++i) {
    SurfaceSample& s = site.samples[i];
    s.curvature = nc[i];
    s.occlusion = no[i];
    s.score = nc[i] + no[i];
    best = std::min(best, s.score);
  }

  // Tie-break among minimal samples: furthest from any non-minimal one.
  std::vector<std::pair<BPoint, std::size_t>> others;
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < site.samples.size(); ++i) {
    if (site.samples[i].score == best) {
      tied.push_back(i);
    } else {
      others.emplace_back(bp(site.samples[i].position), i);
    }
  }
  site.winner = tied.front();
  if (tied.size() > 1 && !others.empty()) {
    const bgi::rtree<std::pair<BPoint, std::size_t>, bgi::rstar<16>> tree(others.begin(), others.end());
    double best_clearance = -1.0;
    for (std::size_t i : tied) {
      double clearance = 0.0;
      tree.query(bgi::nearest(bp(site.samples[i].position), 1),
                 boost::make_function_output_iterator([&](const std::pair<BPoint, std::size_t>& v) {
                   clearance = (site.samples[v.second].position - site.samples[i].position).norm();
                 }));
      if (clearance > best_clearance) {
        best_clearance = clearance;
        site.winner = i;
      }
    }
  }

  const SurfaceSample& w = site.samples[site.winner];
  site.radius = radius[site.winner];
  site.position = w.position;
  site.normal = w.normal;
  Vec3 up = Vec3::UnitZ() - w.normal.z() * w.normal;
  if (up.norm() < 1e-6) up = Vec3::UnitX() - w.normal.x() * w.normal;
  site.up = up.normalized();
  site.right = site.up.cross(site.normal);
  return site;
}

namespace {

// Axis-aligned segment boxes in the text frame: x right, y up, z along the
// normal.
std::vector<TriMesh> local_glyph_boxes(const std::string& id, const EngravingSite& site, double depth,
                                       double stroke) {
  // Character cell w x 2w, gap w / 2; the block's half-diagonal stays
  // inside 90% of the site radius.
  const double n_chars = static_cast<double>(id.size());
  const double span = n_chars + 0.5 * (n_chars - 1);  // block width in units of w
  const double w = 0.9 * site.radius / std::sqrt(0.25 * span * span + 1.0);
  const double h = 2.0 * w;
  const double s = std::min(stroke, 0.3 * w);
  const double block = span * w;

  std::vector<TriMesh> out;
  auto box = [&](double x0, double x1, double y0, double y1) {
    out.push_back(box_mesh(Vec3(x0, y0, -depth), Vec3(x1, y1, depth)));
  };
  for (std::size_t c = 0; c < id.size(); ++c) {
    const double x0 = -block / 2 + static_cast<double>(c) * 1.5 * w;
    const double y0 = -h / 2;
    const std::string segs = kDigitSegments.at(static_cast<std::size_t>(id[c] - '0'));
    for (char seg : segs) {
      switch (seg) {
        case 'a': box(x0, x0 + w, y0 + h - s, y0 + h); break;
        case 'g': box(x0, x0 + w, y0 + h / 2 - s / 2, y0 + h / 2 + s / 2); break;
        case 'd': box(x0, x0 + w, y0, y0 + s); break;
        case 'b': box(x0 + w - s, x0 + w, y0 + h / 2 + s / 2, y0 + h - s); break;
        case 'c': box(x0 + w - s, x0 + w, y0 + s, y0 + h / 2 - s / 2); break;
        case 'e': box(x0, x0 + s, y0 + s, y0 + h / 2 - s / 2); break;
        case 'f': box(x0, x0 + s, y0 + h / 2 + s / 2, y0 + h - s); break;
        default: break;
      }
    }
  }
  return out;
}

Affine site_frame(const EngravingSite& site) {
  Mat3 frame;
  frame.col(0) = site.right;
  frame.col(1) = site.up;
  frame.col(2) = site.normal;
  return {frame, site.position};
}

}  // namespace

std::vector<TriMesh> glyph_solids(const std::string& id, const EngravingSite& site, double depth, double stroke) {
  const Affine place = site_frame(site);
  std::vector<TriMesh> out = local_glyph_boxes(id, site, depth, stroke);
  for (TriMesh& m : out) m = transform(m, place);
  return out;
}

TriMesh glyph_solid(const std::string& id, const EngravingSite& site, double depth, double stroke) {
  // Touching segments share exactly coplanar faces only before the frame
  // rotation, so they are merged first.
  const std::vector<TriMesh> boxes = local_glyph_boxes(id, site, depth, stroke);
  const std::array<TriMesh, 0> none{};
  return transform(union_minus(boxes, none), site_frame(site));
}

EngraveResult place_engraving(const TriMesh& mesh, const EngraveParams& params, double stroke) {
  EngraveResult result;
  result.site = select_site(mesh, params);
  if (!(stroke > 0)) stroke = params.text_depth / 2.0;
  const std::array<TriMesh, 1> base{mesh};
  for (int attempt = 0; attempt <= 3; ++attempt) {
    const double depth = params.text_depth + 1e-5 * attempt;
    try {
      const std::array<TriMesh, 1> glyph{glyph_solid(params.id, result.site, depth, stroke)};
      result.mesh = union_minus(base, glyph);
      if (!is_solid(result.mesh)) throw Error(ErrorCode::kBooleanFailure, "engraving removed the whole part");
      return result;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBooleanFailure) throw;
      if (attempt == 3) throw Error(ErrorCode::kEngraveFailure, std::string(e.what()) + " (id " + params.id + ")");
    }
  }
  return result;
}

}  // namespace rodjoint
