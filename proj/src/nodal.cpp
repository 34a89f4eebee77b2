#include "nodal3d/nodal.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nodal3d/errors.hpp"

namespace nodal3d {

namespace {

// Kuhn subdivision: the 6 permutations of axis insertion order, each giving
// a tet 000 -> e_a -> e_a+e_b -> 111. Corner ids use bit0=x, bit1=y, bit2=z.
constexpr int kTets[6][4] = {
    {0, 1, 3, 7},  // x, y, z
    {0, 1, 5, 7},  // x, z, y
    {0, 2, 3, 7},  // y, x, z
    {0, 2, 6, 7},  // y, z, x
    {0, 4, 5, 7},  // z, x, y
    {0, 4, 6, 7},  // z, y, x
};

struct PolyVertex {
  Vec3 p;
  double v;
};

inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) {
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]),
          a[2] + t * (b[2] - a[2])};
}

// nudge exact zeros so sign tests are strict; the curve moves by O(1e-300)
inline double nudge(double x) { return x == 0.0 ? 1e-300 : x; }

inline PolyVertex edge_cross(const Vec3& pa, const Vec3& pb, double ua,
                             double ub, double va, double vb) {
  const double t = ua / (ua - ub);
  return {lerp(pa, pb, t), va + t * (vb - va)};
}

// Intersect the u=0 polygon of one tet with {v=0}; append the resulting
// segment(s) to the result.
void process_tet(const Vec3 pos[4], const double u[4], const double v[4],
                 NodalResult& out, bool keep) {
  int neg[4], posi[4], nn = 0, np = 0;
  for (int i = 0; i < 4; ++i) {
    if (u[i] < 0.0)
      neg[nn++] = i;
    else
      posi[np++] = i;
  }
  if (nn == 0 || np == 0) return;

  PolyVertex poly[4];
  int k = 0;
  if (nn == 1 || np == 1) {
    const int apex = (nn == 1) ? neg[0] : posi[0];
    const int* rest = (nn == 1) ? posi : neg;
    for (int i = 0; i < 3; ++i)
      poly[k++] = edge_cross(pos[apex], pos[rest[i]], u[apex], u[rest[i]],
                             v[apex], v[rest[i]]);
  } else {
    // 2-2 split: boundary cycle p1q1, p1q2, p2q2, p2q1
    const int p1 = posi[0], p2 = posi[1], q1 = neg[0], q2 = neg[1];
    poly[k++] = edge_cross(pos[p1], pos[q1], u[p1], u[q1], v[p1], v[q1]);
    poly[k++] = edge_cross(pos[p1], pos[q2], u[p1], u[q2], v[p1], v[q2]);
    poly[k++] = edge_cross(pos[p2], pos[q2], u[p2], u[q2], v[p2], v[q2]);
    poly[k++] = edge_cross(pos[p2], pos[q1], u[p2], u[q1], v[p2], v[q1]);
  }

  Vec3 cross[4];
  int nc = 0;
  for (int i = 0; i < k; ++i) {
    const PolyVertex& a = poly[i];
    const PolyVertex& b = poly[(i + 1) % k];
    const double va = nudge(a.v), vb = nudge(b.v);
    if ((va < 0.0) != (vb < 0.0)) {
      const double s = va / (va - vb);
      if (nc < 4) cross[nc] = lerp(a.p, b.p, s);
      ++nc;
    }
  }
  // an even number of boundary sign changes: pair them in cycle order
  for (int i = 0; i + 1 < nc; i += 2) {
    const Vec3& a = cross[i];
    const Vec3& b = cross[i + 1];
    const double dx = b[0] - a[0], dy = b[1] - a[1], dz = b[2] - a[2];
    const double len = std::sqrt(dx * dx + dy * dy + dz * dz);
    out.length += len;
    ++out.segments;
    if (len == 0.0) ++out.zero_length_segments;
    if (keep) out.segs.push_back({a, b});
  }
}

}  // namespace

NodalResult nodal_length(const GridSample& grid, bool keep_segments) {
  const int n0 = grid.dims[0], n1 = grid.dims[1], n2 = grid.dims[2];
  if (n0 < 2 || n1 < 2 || n2 < 2)
    throw ParameterOutOfRange("nodal_length needs at least 2 vertices per axis");

  NodalResult out;
  for (int l = 0; l + 1 < n2; ++l) {
    for (int j = 0; j + 1 < n1; ++j) {
      for (int i = 0; i + 1 < n0; ++i) {
        double u[8], v[8];
        Vec3 p[8];
        for (int c = 0; c < 8; ++c) {
          const int ci = i + (c & 1), cj = j + ((c >> 1) & 1),
                    cl = l + ((c >> 2) & 1);
          const std::size_t idx = grid.vertex_index(ci, cj, cl);
          u[c] = nudge(grid.xi[idx]);
          v[c] = grid.eta[idx];
          p[c] = {grid.coord(ci), grid.coord(cj), grid.coord(cl)};
        }
        ++out.cells;
        for (const auto& tet : kTets) {
          ++out.tets;
          const Vec3 tp[4] = {p[tet[0]], p[tet[1]], p[tet[2]], p[tet[3]]};
          const double tu[4] = {u[tet[0]], u[tet[1]], u[tet[2]], u[tet[3]]};
          const double tv[4] = {v[tet[0]], v[tet[1]], v[tet[2]], v[tet[3]]};
          process_tet(tp, tu, tv, out, keep_segments);
        }
      }
    }
  }
  return out;
}

std::vector<double> length_convergence_study(const FieldRealization& field,
                                             double n,
                                             const std::vector<double>& hs) {
  std::vector<double> out;
  out.reserve(hs.size());
  for (double h : hs)
    out.push_back(nodal_length(field.sample_grid(n, h)).length);
  return out;
}

void export_segments_csv(const NodalResult& r, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path);
  f << "ax,ay,az,bx,by,bz\n";
  char buf[256];
  for (const auto& s : r.segs) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  s.a[0], s.a[1], s.a[2], s.b[0], s.b[1], s.b[2]);
    f << buf;
  }
  if (!f.good()) throw IoError("write failed: " + path);
}

}  // namespace nodal3d
