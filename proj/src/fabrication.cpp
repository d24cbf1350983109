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

#include "rodjoint/fabrication.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>

#include "rodjoint/joint.hpp"

namespace rodjoint {

namespace {

constexpr double kFitSlack = 1e-9;
constexpr std::size_t kExhaustiveLimit = 8;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

struct Item {
  double length;
  EdgeId edge;
};

// Orders pieces within bins and bins within the plan so that equal
// packings compare equal.
void canonicalize(std::vector<CutBin>& bins) {
  for (CutBin& b : bins) {
    std::sort(b.pieces.begin(), b.pieces.end(), [](const CutPiece& x, const CutPiece& y) {
      return x.length != y.length ? x.length > y.length : x.edge < y.edge;
    });
  }
  std::sort(bins.begin(), bins.end(), [](const CutBin& x, const CutBin& y) {
    const double ux = x.used(), uy = y.used();
    if (ux != uy) return ux > uy;
    return std::lexicographical_compare(
        x.pieces.begin(), x.pieces.end(), y.pieces.begin(), y.pieces.end(),
        [](const CutPiece& a, const CutPiece& b) { return a.length != b.length ? a.length < b.length : a.edge < b.edge; });
  });
}

std::vector<CutBin> first_fit(const std::vector<Item>& items, const std::vector<std::size_t>& order, double capacity,
                              double kerf) {
  std::vector<CutBin> bins;
  std::vector<double> loads;
  for (std::size_t idx : order) {
    const Item& it = items[idx];
    bool placed = false;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      const double extra = it.length + (bins[b].pieces.empty() ? 0.0 : kerf);
      if (loads[b] + extra <= capacity + kFitSlack) {
        bins[b].pieces.push_back({it.edge, it.length});
        loads[b] += extra;
        placed = true;
        break;
      }
    }
    if (!placed) {
      bins.push_back({{{it.edge, it.length}}});
      loads.push_back(it.length);
    }
  }
  canonicalize(bins);
  return bins;
}

// Strict "better packing" order: fewer bins, emptier last bin, smaller
// signature.
bool better(const std::vector<CutBin>& a, const std::vector<CutBin>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const double la = a.back().used(), lb = b.back().used();
  if (la != lb) return la < lb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& pa = a[i].pieces;
    const auto& pb = b[i].pieces;
    for (std::size_t k = 0; k < std::min(pa.size(), pb.size()); ++k) {
      if (pa[k].length != pb[k].length) return pa[k].length < pb[k].length;
      if (pa[k].edge != pb[k].edge) return pa[k].edge < pb[k].edge;
    }
    if (pa.size() != pb.size()) return pa.size() < pb.size();
  }
  return false;
}

std::vector<std::size_t> decreasing_order(const std::vector<Item>& items) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return items[x].length > items[y].length; });
  return order;
}

}  // namespace

double CutBin::used() const {
  double s = 0.0;
  for (const CutPiece& p : pieces) s += p.length;
  return s;
}

PrintOrientation print_orientation(const EdgeNetwork& net, NodeId node) {
  Vec3 sum = Vec3::Zero();
  for (EdgeId e : net.incident_edges(node)) {
    const Vec3 d = net.nodes[net.edges[e].other(node)] - net.nodes[node];
    const double len = d.norm();
    if (len >= kDegenerateEdgeLength) sum += d / len;
  }
  PrintOrientation out{node, Mat3::Identity()};
  const double n = sum.norm();
  if (n >= 1e-6) out.rotation = rotation_to(sum / n).transpose();
  return out;
}

TriMesh print_ready(const JointSolid& joint) {
  TriMesh m = transform(joint.mesh, Affine{joint.print_rotation, Vec3::Zero()});
  if (m.vertices.empty()) return m;
  double zmin = m.vertices.front().z();
  for (const Vec3& v : m.vertices) zmin = std::min(zmin, v.z());
  for (Vec3& v : m.vertices) v.z() -= zmin;
  return m;
}

std::size_t first_fit_decreasing_bins(const std::vector<double>& lengths, double capacity, double kerf) {
  std::vector<Item> items;
  for (std::size_t i = 0; i < lengths.size(); ++i) items.push_back({lengths[i], i});
  return first_fit(items, decreasing_order(items), capacity, kerf).size();
}

CutPlan pack_cuts(const std::vector<double>& lengths, const PackOptions& options, const std::vector<EdgeId>& edges) {
  if (!edges.empty() && edges.size() != lengths.size()) {
    throw Error(ErrorCode::kInvalidArgument, "edge ids and lengths differ in count");
  }
  CutPlan plan;
  plan.stock_length = options.stock_length;
  plan.padding = options.padding;
  plan.kerf = options.kerf;
  const double capacity = plan.capacity();
  if (!(capacity > 0)) throw Error(ErrorCode::kInvalidArgument, "stock shorter than its end padding");
  std::vector<Item> items;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const EdgeId id = edges.empty() ? i : edges[i];
    if (!(lengths[i] > 0)) {
      throw Error(ErrorCode::kInvalidArgument, "rod " + std::to_string(id) + " has non-positive length");
    }
    if (lengths[i] > capacity + kFitSlack) {
      throw Error(ErrorCode::kOversizeRod, "rod " + std::to_string(id) + " (" + fmt(lengths[i]) +
                                               " mm) exceeds usable stock " + fmt(capacity) + " mm");
    }
    items.push_back({lengths[i], id});
  }
  if (items.empty()) return plan;

  std::vector<std::size_t> order = decreasing_order(items);
  std::vector<CutBin> best = first_fit(items, order, capacity, options.kerf);
  auto consider = [&](const std::vector<std::size_t>& ord) {
    auto cand = first_fit(items, ord, capacity, options.kerf);
    if (better(cand, best)) best = std::move(cand);
  };
  if (items.size() <= kExhaustiveLimit) {
    // Some ordering makes first-fit optimal, so trying them all is exact.
    std::sort(order.begin(), order.end());
    do {
      consider(order);
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    std::mt19937_64 rng(options.seed);
    for (int r = 0; r < options.restarts; ++r) {
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t i = order.size() - 1; i > 0; --i) {
        std::swap(order[i], order[rng() % (i + 1)]);
      }
      consider(order);
    }
  }
  plan.bins = std::move(best);
  double total = 0.0;
  for (const Item& it : items) total += it.length;
  plan.waste_total = static_cast<double>(plan.bins.size()) * capacity - total;
  return plan;
}

std::string cutplan_svg(const CutPlan& plan, double jig_pitch, double rod_diameter) {
  const double tick = rod_diameter + 2.0;
  const double width = plan.stock_length;
  const double rows = static_cast<double>(plan.bins.size());
  const double height = tick + (rows > 0 ? (rows - 1) * jig_pitch : 0.0);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "mm\" height=\"" + fmt(height) +
         "mm\" viewBox=\"0 " + fmt(-tick / 2) + " " + fmt(width) + " " + fmt(height) + "\">\n";
  if (!plan.bins.empty()) {
    out += "<g fill=\"none\" stroke=\"black\" stroke-width=\"0.01\">\n";
    for (std::size_t row = 0; row < plan.bins.size(); ++row) {
      const double y = static_cast<double>(row) * jig_pitch;
      std::vector<double> xs;
      if (plan.padding > 0) xs.push_back(plan.padding);
      double x = plan.padding;
      const auto& pieces = plan.bins[row].pieces;
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        x += pieces[k].length + (k > 0 ? plan.kerf : 0.0);
        xs.push_back(x);
      }
      for (double cx : xs) {
        out += "<line x1=\"" + fmt(cx) + "\" y1=\"" + fmt(y - tick / 2) + "\" x2=\"" + fmt(cx) + "\" y2=\"" +
               fmt(y + tick / 2) + "\"/>\n";
      }
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string cutplan_text(const CutPlan& plan) {
  std::string out = "stock " + fmt(plan.stock_length) + " mm, padding " + fmt(plan.padding) + " mm, usable " +
                    fmt(plan.capacity()) + " mm, kerf " + fmt(plan.kerf) + " mm\n";
  for (std::size_t b = 0; b < plan.bins.size(); ++b) {
    out += "bin " + std::to_string(b + 1) + ":";
    const auto& pieces = plan.bins[b].pieces;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      out += (k ? ", " : " ") + std::string("edge ") + std::to_string(pieces[k].edge) + " " + fmt(pieces[k].length);
    }
    const double kerf = plan.kerf * static_cast<double>(pieces.empty() ? 0 : pieces.size() - 1);
    out += "; waste " + fmt(plan.capacity() - plan.bins[b].used() - kerf) + "\n";
  }
  out += "bins " + std::to_string(plan.bins.size()) + ", total waste " + fmt(plan.waste_total) + " mm\n";
  return out;
}

}  // namespace rodjoint
