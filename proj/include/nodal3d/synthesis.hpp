#ifndef NODAL3D_SYNTHESIS_HPP
#define NODAL3D_SYNTHESIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nodal3d/covariance.hpp"
#include "nodal3d/spectrum.hpp"

namespace nodal3d {

// Vertex samples of one realization on a uniform grid over [-n,n]^3.
// Storage is x-fastest: index = (l*dims[1] + j)*dims[0] + i.
struct GridSample {
  double n = 0.0;
  double h = 0.0;
  std::array<int, 3> dims{};
  std::uint64_t seed = 0;
  std::vector<double> xi, eta;
  std::vector<double> grad_xi[3], grad_eta[3];  // filled on request
  bool has_gradients = false;

  double coord(int index) const { return -n + h * index; }
  std::size_t vertex_index(int i, int j, int l) const {
    return (static_cast<std::size_t>(l) * dims[1] + j) * dims[0] + i;
  }
};

// One sampled random wave psi = xi + i*eta: M cosine atoms per component
// with independent wavevectors and phases, so E[xi(x)xi(y)] = r(x-y)
// exactly over the sampling ensemble for any M. Immutable after
// construction.
class FieldRealization {
 public:
  FieldRealization(const RadialSpectrum& s, int atoms, std::uint64_t seed);
  FieldRealization(const AnisotropicSpectrum& s, int atoms, std::uint64_t seed);

  int atom_count() const { return atoms_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Vec3>& wavevectors_xi() const { return k_xi_; }
  const std::vector<Vec3>& wavevectors_eta() const { return k_eta_; }
  const std::vector<double>& phases_xi() const { return phase_xi_; }
  const std::vector<double>& phases_eta() const { return phase_eta_; }

  struct PointValue {
    double xi, eta;
    Vec3 grad_xi, grad_eta;
  };
  PointValue evaluate(const Vec3& x) const;

  GridSample sample_grid(double n, double h, bool gradients = false) const;

 private:
  template <typename S>
  void draw_atoms(const S& s, std::uint64_t seed);

  int atoms_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<Vec3> k_xi_, k_eta_;
  std::vector<double> phase_xi_, phase_eta_;
};

// Exactly Gaussian joint samples of xi at the given points (dense Cholesky
// of [r(x_i - x_j)] with an escalating diagonal jitter). Returns
// draws x points.
std::vector<std::vector<double>> exact_gaussian_oracle(
    const CovarianceProfile& profile, const std::vector<Vec3>& points,
    int draws, std::uint64_t seed);

// Optional offline export: flat CSV of vertex values plus a JSON sidecar
// with dims/h/n/seed.
void export_grid_csv(const GridSample& g, const std::string& csv_path,
                     const std::string& sidecar_path);

}  // namespace nodal3d

#endif
