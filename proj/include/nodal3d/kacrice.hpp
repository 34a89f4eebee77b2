#ifndef NODAL3D_KACRICE_HPP
#define NODAL3D_KACRICE_HPP

#include <cstdint>

#include "nodal3d/spectrum.hpp"

namespace nodal3d {

// lambda * vol / pi
double expected_length_isotropic(double lambda, double volume);

// Monte Carlo moments of |N ^ N'| for independent standard 3-vectors:
// exact values are 2 and 6.
struct WedgeMoments {
  double mean_norm = 0.0;
  double mean_sq = 0.0;
  double se_norm = 0.0;  // standard error of mean_norm
  long samples = 0;
};
WedgeMoments cross_product_moment(long samples, std::uint64_t seed);

// (1/2pi) E|xi' ^ eta'| for -r''(0) = diag(lambdas): the expected length per
// unit volume. Same seed+samples means common random numbers, so ratios and
// finite differences across lambda values carry no independent MC noise.
double wedge_functional_mc(const std::array<double, 3>& lambdas, long samples,
                           std::uint64_t seed);

// Deterministic oracle for E|diag(a) (N ^ N')|: condition on N (the wedge is
// then Gaussian in the plane normal to N) and use
// E sqrt(Q) = (2 sqrt(pi))^{-1} int_0^inf s^{-3/2} (1 - E e^{-sQ}) ds
// with E e^{-sQ} = det(I + 2sC)^{-1/2}; sphere average by product quadrature.
double wedge_norm_weighted(const std::array<double, 3>& a);

// Theorem-style expectation vol * sqrt(l1 l2 l3)/(2pi) E|D^{-1/2}(N ^ N')|,
// evaluated with the deterministic oracle above.
double expected_length_anisotropic(const SpectralMoments& m, double volume);

// Audit of the near-isotropic first-order expansion. Reports the printed
// coefficients next to two independent oracles (quadrature finite
// differences and common-random-number MC finite differences); asserts
// nothing about the printed values.
struct PerturbationAudit {
  double lambda = 0.0;
  double step = 0.0;
  // partial of E|xi' ^ eta'| in each lambda_i at the symmetric point
  double partial_printed = 0.0;     // -2 + (4/3) sqrt(lambda)
  double partial_symmetric = 0.0;   // 2/3, from first-order homogeneity
  double partial_fd_quadrature = 0.0;
  double partial_fd_mc = 0.0;
  // induced coefficient of sum(lambda_i - lambda) in the expansion
  double coeff_printed = 0.0;       // -1 + (2/3) sqrt(lambda)
  double coeff_oracle = 0.0;        // partial_fd_quadrature / (2 lambda)
};
PerturbationAudit perturbation_check(double lambda, long mc_samples,
                                     std::uint64_t seed, double step = 1e-2);

}  // namespace nodal3d

#endif
