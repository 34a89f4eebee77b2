#ifndef NODAL3D_COVARIANCE_HPP
#define NODAL3D_COVARIANCE_HPP

#include <vector>

#include "nodal3d/spectrum.hpp"

namespace nodal3d {

// gamma and radial derivatives at one radius; g1_over_t carries gamma'(t)/t
// which stays finite at t=0 (needed by Dr and by the Hessian assembly)
struct GammaValues {
  double g = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double g1_over_t = 0.0;
};

// Radial covariance profile r(x) = gamma(|x|) of an isotropic spectrum.
// Closed forms for Monochromatic / BargmannFock / GammaType, quadrature of
// the spherical-Bessel kernel against f otherwise. Immutable, thread-safe.
class CovarianceProfile {
 public:
  explicit CovarianceProfile(RadialSpectrum spectrum);

  const RadialSpectrum& spectrum() const { return spectrum_; }
  double lambda() const { return lambda_; }

  GammaValues gamma_all(double t) const;
  double gamma(double t) const { return gamma_all(t).g; }
  double gamma1(double t) const { return gamma_all(t).g1; }
  double gamma2(double t) const { return gamma_all(t).g2; }

  // quadrature route, available for every model with a density (oracle for
  // the closed forms)
  GammaValues gamma_quadrature(double t) const;

  // Dr functional, radial form; equals the Cartesian form identically
  double dr(double t) const;
  double dr_cartesian(const Vec3& x) const;

  // normalized envelope max{|r|, |r_i'|/sqrt(lambda), |r_ij''|/lambda}
  double envelope_R(const Vec3& x) const;

 private:
  RadialSpectrum spectrum_;
  double lambda_ = 0.0;
  std::vector<double> gamma_poly_;  // GammaType numerator coefficients
};

// Box covariogram of Q_n = [-n,n]^3: pointwise self-overlap volume and its
// spherical average. The unit-halfwidth radial profile C is tabulated once
// (piecewise Gauss-Legendre split at the kink radii) and interpolated.
class BoxCovariogram {
 public:
  // vol(Q_n intersect (Q_n - x))
  static double pointwise(double n, const Vec3& x);

  // C_n(rho): spherical average of pointwise/vol(Q_n); equals C(rho/n)
  static double radialized(double n, double rho);

  // unit profile C(s), s in [0, 2*sqrt(3)]; C(0)=1, C(s)=0 beyond support
  static double unit_profile(double s);

  // direct sphere quadrature of the unit profile (test oracle for the table)
  static double unit_profile_direct(double s);
};

}  // namespace nodal3d

#endif
