#ifndef NODAL3D_SPECTRUM_HPP
#define NODAL3D_SPECTRUM_HPP

#include <array>
#include <string>
#include <vector>

#include "nodal3d/rng.hpp"

namespace nodal3d {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

enum class Model { Monochromatic, BargmannFock, GammaType, BlackBody, PowerLaw };

std::string model_name(Model m);
Model model_from_name(const std::string& name);

struct ModelParams {
  double kappa = 1.0;  // Monochromatic wavenumber
  int p = 1;           // GammaType order
  double beta = 1.0;   // GammaType scale / PowerLaw exponent
};

struct SpectralMoments {
  double lambda = 0.0;              // isotropic second spectral moment
  Mat3 matrix{};                    // -r''(0)
  std::array<double, 3> eigenvalues{};  // ascending
};

// Radial power spectrum: density f on (0,inf), or an atom at kappa for the
// monochromatic model. Normalized so that the total wavevector mass
// 4*pi*Pi_rad(R+) equals 1. Immutable after construction.
class RadialSpectrum {
 public:
  static RadialSpectrum make(Model model, ModelParams params = {});
  static RadialSpectrum make(const std::string& name, ModelParams params = {});

  Model model() const { return model_; }
  const ModelParams& params() const { return params_; }
  bool has_density() const { return model_ != Model::Monochromatic; }

  // f(rho); throws for the monochromatic atom
  double density(double rho) const;

  // truncation radius used by all quadratures over this spectrum
  double rho_max() const { return rho_max_; }

  // 4*pi * integral of f (or 4*pi * atom mass), by quadrature: equals 1 for
  // every catalog model within 1e-10
  double normalization_mass() const;

  double second_moment_lambda() const;

  // radial CDF of the wavevector modulus distribution 4*pi*f
  double radial_cdf(double rho) const;

  double sample_rho(Rng& rng) const;
  Vec3 sample_wavevector(Rng& rng) const;

  // PowerLaw scaling propositions need beta in (0, 1/4); flagged, not a
  // construction error
  bool power_law_scaling_regime() const;

 private:
  RadialSpectrum() = default;
  void build_cdf_table();

  Model model_ = Model::BargmannFock;
  ModelParams params_;
  double rho_max_ = 0.0;
  double lambda_ = 0.0;

  // inversion table for BargmannFock / GammaType / BlackBody
  std::vector<double> tab_rho_, tab_cdf_, tab_slope_;  // slope = d rho / d F
};

// Anisotropy via an invertible linear transform of wavevectors, k -> A k.
class AnisotropicSpectrum {
 public:
  AnisotropicSpectrum(RadialSpectrum base, const Mat3& transform);

  const RadialSpectrum& base() const { return base_; }
  const Mat3& transform() const { return transform_; }

  Vec3 sample_wavevector(Rng& rng) const;

 private:
  RadialSpectrum base_;
  Mat3 transform_;
};

SpectralMoments second_moment(const RadialSpectrum& s);
SpectralMoments second_moment(const AnisotropicSpectrum& s);

Mat3 diag_matrix(double a, double b, double c);

}  // namespace nodal3d

#endif
