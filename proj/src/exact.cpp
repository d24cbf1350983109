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

#include "exact.hpp"

#include <algorithm>
#include <cmath>

namespace rodjoint::exact {

namespace {

constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
// Shewchuk's static bound for orient3d on exact double inputs.
constexpr double kO3dBound = (7.0 + 56.0 * kEps) * kEps;

Q det3(const Q& ax, const Q& ay, const Q& az, const Q& bx, const Q& by, const Q& bz, const Q& cx, const Q& cy,
       const Q& cz) {
  return ax * (by * cz - bz * cy) + bx * (cy * az - cz * ay) + cx * (ay * bz - az * by);
}

double max_abs(std::initializer_list<double> xs) {
  double m = 0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Q orient3d_value(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Q ax = Q(b.x()) - Q(a.x()), ay = Q(b.y()) - Q(a.y()), az = Q(b.z()) - Q(a.z());
  const Q bx = Q(c.x()) - Q(a.x()), by = Q(c.y()) - Q(a.y()), bz = Q(c.z()) - Q(a.z());
  const Q cx = Q(d.x()) - Q(a.x()), cy = Q(d.y()) - Q(a.y()), cz = Q(d.z()) - Q(a.z());
  return det3(ax, ay, az, bx, by, bz, cx, cy, cz);
}

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  // Evaluated as Shewchuk's determinant of (a-d, b-d, c-d), which has the
  // opposite sign of ours.
  const double adx = a.x() - d.x(), bdx = b.x() - d.x(), cdx = c.x() - d.x();
  const double ady = a.y() - d.y(), bdy = b.y() - d.y(), cdy = c.y() - d.y();
  const double adz = a.z() - d.z(), bdz = b.z() - d.z(), cdz = c.z() - d.z();
  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                           (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                           (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
  const double bound = kO3dBound * permanent;
  if (det > bound) return -1;
  if (-det > bound) return 1;
  return sign(orient3d_value(a, b, c, d));
}

int orient3d(const QPoint& a, const QPoint& b, const QPoint& c, const QPoint& d) {
  const Vec3 &pa = a.approx, &pb = b.approx, &pc = c.approx, &pd = d.approx;
  const Vec3 u = pb - pa, v = pc - pa, w = pd - pa;
  const double det = u.dot(v.cross(w));
  const double m = std::max({pa.cwiseAbs().maxCoeff(), pb.cwiseAbs().maxCoeff(), pc.cwiseAbs().maxCoeff(),
                             pd.cwiseAbs().maxCoeff()});
  const double eta = 4 * kEps * m;
  const double dmax = std::max({u.cwiseAbs().maxCoeff(), v.cwiseAbs().maxCoeff(), w.cwiseAbs().maxCoeff()}) + eta;
  const double perm = u.cwiseAbs().dot(v.cwiseAbs().cross(w.cwiseAbs()).cwiseAbs()) + 6 * dmax * dmax * dmax;
  const double bound = 24 * dmax * dmax * eta + 8 * kEps * perm;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  const Q ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
  const Q vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
  const Q wx = d[0] - a[0], wy = d[1] - a[1], wz = d[2] - a[2];
  return sign(det3(ux, uy, uz, vx, vy, vz, wx, wy, wz));
}

std::array<Q, 3> normal(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Q ux = Q(b.x()) - Q(a.x()), uy = Q(b.y()) - Q(a.y()), uz = Q(b.z()) - Q(a.z());
  const Q vx = Q(c.x()) - Q(a.x()), vy = Q(c.y()) - Q(a.y()), vz = Q(c.z()) - Q(a.z());
  return {uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx};
}

int orient2d(const QPoint& a, const QPoint& b, const QPoint& c, int u, int v) {
  const double au = a.approx[u], av = a.approx[v];
  const double bu = b.approx[u] - au, bv = b.approx[v] - av;
  const double cu = c.approx[u] - au, cv = c.approx[v] - av;
  const double l = bu * cv, r = bv * cu;
  const double det = l - r;
  const double m = max_abs({au, av, b.approx[u], b.approx[v], c.approx[u], c.approx[v]});
  const double eta = 4 * kEps * m;
  const double dmax = max_abs({bu, bv, cu, cv}) + eta;
  const double bound = 8 * dmax * eta + 4 * kEps * (std::abs(l) + std::abs(r));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  const Q ebu = b[u] - a[u], ebv = b[v] - a[v];
  const Q ecu = c[u] - a[u], ecv = c[v] - a[v];
  return sign(Q(ebu * ecv - ebv * ecu));
}

int orient2d(const Vec3& a, const Vec3& b, const Vec3& c, int u, int v) {
  const double bu = b[u] - a[u], bv = b[v] - a[v];
  const double cu = c[u] - a[u], cv = c[v] - a[v];
  const double l = bu * cv, r = bv * cu;
  const double det = l - r;
  // Shewchuk's ccwerrboundA.
  const double bound = (3.0 + 16.0 * kEps) * kEps * (std::abs(l) + std::abs(r));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  const Q ebu = Q(b[u]) - Q(a[u]), ebv = Q(b[v]) - Q(a[v]);
  const Q ecu = Q(c[u]) - Q(a[u]), ecv = Q(c[v]) - Q(a[v]);
  return sign(Q(ebu * ecv - ebv * ecu));
}

Q orient2d_value(const QPoint& a, const QPoint& b, const QPoint& c, int u, int v) {
  return (b[u] - a[u]) * (c[v] - a[v]) - (b[v] - a[v]) * (c[u] - a[u]);
}

bool collinear(const QPoint& a, const QPoint& b, const QPoint& p) {
  for (int u = 0; u < 3; ++u) {
    if (orient2d(a, b, p, u, (u + 1) % 3) != 0) return false;
  }
  return true;
}

bool strictly_between(const QPoint& a, const QPoint& b, const QPoint& p) {
  for (int i = 0; i < 3; ++i) {
    const int c = cmp(a[i], b[i]);
    if (c == 0) continue;
    return c < 0 ? (a[i] < p[i] && p[i] < b[i]) : (b[i] < p[i] && p[i] < a[i]);
  }
  return false;
}

QPoint lerp(const QPoint& a, const QPoint& b, const Q& t) {
  return QPoint(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2]));
}

int dominant_axis(const std::array<Q, 3>& n, int* sign_out) {
  int best = 0;
  Q best_abs = abs(n[0]);
  for (int i = 1; i < 3; ++i) {
    Q a = abs(n[i]);
    if (a > best_abs) {
      best = i;
      best_abs = a;
    }
  }
  if (sign_out) *sign_out = sign(n[best]);
  return best;
}

}  // namespace rodjoint::exact
