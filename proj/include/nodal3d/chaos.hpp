#ifndef NODAL3D_CHAOS_HPP
#define NODAL3D_CHAOS_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "nodal3d/covariance.hpp"
#include "nodal3d/synthesis.hpp"

namespace nodal3d {

// Probabilists' Hermite polynomial H_n by the recurrence
// H_n = x H_{n-1} - (n-1) H_{n-2}.
double hermite(int n, double x);

// Multi-index over Ybar = (xi, eta, xi'/sqrt(lambda), eta'/sqrt(lambda)):
// slots 0..1 are the field values, 2..7 the normalized gradient parts.
using Index8 = std::array<int, 8>;
using Index6 = std::array<int, 6>;

double hermite_multi(const Index8& alpha, const std::array<double, 8>& y);

// b_alpha = H_alpha(0) / (alpha! sqrt(2 pi)); zero for odd orders
double coefficient_b(int order);

struct McEstimate {
  double value = 0.0;
  double se = 0.0;
  long samples = 0;
};

// Hermite coefficients of y in R^6 -> |(y1,y2,y3) ^ (y4,y5,y6)| under the
// standard Gaussian, a_idx = E[ |n ^ n'| Htilde_idx(n) ] / idx!. The batch
// form shares one sample stream across all requested indices.
McEstimate coefficient_a_mc(const Index6& idx, long samples,
                            std::uint64_t seed);
std::vector<McEstimate> coefficient_a_batch(const std::vector<Index6>& idx,
                                            long samples, std::uint64_t seed);

// c_alpha = b_{alpha_1} b_{alpha_2} a_{(alpha_3..alpha_8)}
McEstimate coefficient_c(const Index8& alpha, long samples,
                         std::uint64_t seed);

// covariance of the 16-vector (Ybar(0), Ybar(x)); diagonal blocks are the
// identity for any isotropic profile
using Cov16 = std::array<std::array<double, 16>, 16>;
Cov16 ybar_covariance(const CovarianceProfile& profile, const Vec3& x);

// E[Htilde_alpha(Ybar(0)) Htilde_beta(Ybar(x))] by Mehler's formula: sum
// over nonnegative 8x8 matrices d with column sums alpha and row sums beta
// of alpha! beta! prod cov_ij^{d_ij} / d_ij!. Exact enumeration, gated at
// |alpha| <= 6.
double mehler_expectation(const Index8& alpha, const Index8& beta,
                          const Cov16& sigma);

// Var(I_2(Q_n)) / vol(Q_n) = (4/pi) int_0^{2 sqrt3 n} C(rho/n) Dr(rho)
// rho^2 drho with the box covariogram C
double var_I2_per_vol(const CovarianceProfile& profile, double n);

// direct route to the same limit: (4/pi) int_0^inf Dr(rho) rho^2 drho,
// doubling the cutoff until the increment is negligible
double v2_quadrature(const CovarianceProfile& profile);

// spectral limit (1/pi^2) int Dr dx = 32 pi^2 int (1 - rho^2/(3 lambda))^2
// f(rho)^2 rho^-2 drho; DivergentIntegral for the monochromatic atom and
// the power-law divergence at rho = 0. (Derived via the Fourier pair of Dr;
// see v2_plancherel_printed_form for the literature variant kept for audit
// reports.)
double v2_plancherel(const RadialSpectrum& spectrum);

// the (1/pi^2) 4 pi int (1 + rho^2/(3 lambda))^2 f^2 rho^-2 form as printed
// in the literature; reported alongside the derived value, never asserted
double v2_plancherel_printed_form(const RadialSpectrum& spectrum);

// three-term split of int C(y/n) D(y) y^2 dy for Monochromatic(1):
// t1 -> 0, t2 -> 2 pi, t3 -> 6J = -2 pi
struct DecayRow {
  double n = 0.0;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
  double total = 0.0;
};
struct DecayTable {
  std::vector<DecayRow> rows;
  double integral_F = 0.0;  // J = -pi/3
};
DecayTable monochromatic_decay(const std::vector<double>& ns);

// least-squares slope of log Var(I_2(Q_n)) against log vol(Q_n)
struct ScalingFit {
  double exponent = 0.0;
  double r2 = 0.0;
  std::vector<double> ns;
  std::vector<double> var_per_vol;
};
ScalingFit powerlaw_scaling(const RadialSpectrum& spectrum,
                            const std::vector<double>& ns);

// grid (trapezoid) evaluation of the second chaotic component
// I_2 = sum_k c_{2e_k} int_Q Htilde_{2e_k}(Ybar(x)) dx for one realization;
// requires gradients in the sample
double second_chaos_grid(const GridSample& grid, double lambda);

}  // namespace nodal3d

#endif
