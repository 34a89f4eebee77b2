#ifndef NODAL3D_NODAL_HPP
#define NODAL3D_NODAL_HPP

#include <string>
#include <vector>

#include "nodal3d/synthesis.hpp"

namespace nodal3d {

struct NodalSegment {
  Vec3 a{}, b{};
};

struct NodalResult {
  double length = 0.0;
  std::size_t cells = 0;
  std::size_t tets = 0;
  std::size_t segments = 0;
  std::size_t zero_length_segments = 0;
  std::vector<NodalSegment> segs;  // kept only on request
};

// Length of the curve {xi = 0} intersect {eta = 0} inside [-n,n]^3, by
// marching tetrahedra on the Kuhn 6-tet subdivision of each grid cell (all
// tets share the cell diagonal (0,0,0)-(1,1,1), so faces match across
// cells). Deterministic: fixed traversal order, plain accumulation.
NodalResult nodal_length(const GridSample& grid, bool keep_segments = false);

// Lengths for one realization at several grid steps (refinement study).
std::vector<double> length_convergence_study(const FieldRealization& field,
                                             double n,
                                             const std::vector<double>& hs);

void export_segments_csv(const NodalResult& r, const std::string& path);

}  // namespace nodal3d

#endif
