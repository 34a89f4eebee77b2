#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nodal3d/kacrice.hpp"

using namespace nodal3d;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

TEST_CASE("isotropic expectation is lambda vol / pi") {
  CHECK(expected_length_isotropic(1.0, 1.0) ==
        doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(expected_length_isotropic(1.0 / 3.0, 216.0) ==
        doctest::Approx(72.0 / kPi).epsilon(1e-15));
}

TEST_CASE("vorticity moments: E|N ^ N'| = 2, E|N ^ N'|^2 = 6") {
  const WedgeMoments m = cross_product_moment(1000000, 88);
  CHECK(std::abs(m.mean_norm - 2.0) < 5.0 * m.se_norm);
  CHECK(std::abs(m.mean_norm - 2.0) < 0.01);
  CHECK(m.mean_sq == doctest::Approx(6.0).epsilon(0.01));
}

TEST_CASE("deterministic oracle: isotropic case is exactly 2") {
  CHECK(wedge_norm_weighted({1.0, 1.0, 1.0}) ==
        doctest::Approx(2.0).epsilon(1e-11));
  // degree-1 homogeneity: scaling all entries scales the value
  const double base = wedge_norm_weighted({0.7, 1.1, 1.9});
  CHECK(wedge_norm_weighted({2 * 0.7, 2 * 1.1, 2 * 1.9}) ==
        doctest::Approx(2.0 * base).epsilon(1e-10));
}

TEST_CASE("anisotropic oracle agrees with the MC functional") {
  // per-unit-volume expectation for -r''(0) = diag(1,1,4)
  SpectralMoments m;
  m.eigenvalues = {1.0, 1.0, 4.0};
  m.lambda = 2.0;
  const double oracle = expected_length_anisotropic(m, 1.0);
  const double mc = wedge_functional_mc({1.0, 1.0, 4.0}, 2000000, 303);
  CHECK(mc == doctest::Approx(oracle).epsilon(2e-3));
  // isotropic reduction matches the closed form
  SpectralMoments iso;
  iso.eigenvalues = {0.5, 0.5, 0.5};
  iso.lambda = 0.5;
  CHECK(expected_length_anisotropic(iso, 3.0) ==
        doctest::Approx(expected_length_isotropic(0.5, 3.0)).epsilon(1e-10));
}

TEST_CASE("common random numbers: exact scaling of the MC functional") {
  const double a = wedge_functional_mc({1.0, 1.3, 0.8}, 200000, 17);
  const double b = wedge_functional_mc({4.0, 5.2, 3.2}, 200000, 17);
  CHECK(b == doctest::Approx(4.0 * a).epsilon(1e-11));
}

TEST_CASE("perturbation audit: partials and oracle coefficient") {
  const PerturbationAudit a = perturbation_check(1.0, 400000, 55, 1e-2);
  CHECK(a.partial_symmetric == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(a.partial_fd_quadrature ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-4));
  CHECK(a.partial_fd_mc == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  CHECK(a.coeff_oracle == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
  // printed first-order coefficient (-1 + (2/3) sqrt(lambda) at lambda = 1)
  // is reported, and disagrees with the oracle; documented, not asserted
  CHECK(a.partial_printed == doctest::Approx(-2.0 + 4.0 / 3.0).epsilon(1e-12));
  CHECK(a.coeff_printed == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(a.coeff_printed - a.coeff_oracle) > 0.1);
}

TEST_CASE("symmetric perturbation cancels at first order") {
  SpectralMoments m;
  m.eigenvalues = {0.98, 1.0, 1.02};
  m.lambda = 1.0;
  const double aniso = expected_length_anisotropic(m, 1.0);
  CHECK(std::abs(aniso / expected_length_isotropic(1.0, 1.0) - 1.0) < 4e-4);
}
