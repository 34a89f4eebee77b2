#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nodal3d/covariance.hpp"

using namespace nodal3d;

namespace {
CovarianceProfile make_profile(Model m, ModelParams p = {}) {
  return CovarianceProfile(RadialSpectrum::make(m, p));
}
}  // namespace

TEST_CASE("Bargmann-Fock closed form gamma = exp(-t^2/2)") {
  const auto prof = make_profile(Model::BargmannFock);
  for (double t : {0.0, 0.3, 1.0, 2.5}) {
    const GammaValues g = prof.gamma_all(t);
    CHECK(g.g == doctest::Approx(std::exp(-t * t / 2)).epsilon(1e-12));
    CHECK(g.g1 == doctest::Approx(-t * std::exp(-t * t / 2)).epsilon(1e-12));
    CHECK(g.g2 ==
          doctest::Approx((t * t - 1) * std::exp(-t * t / 2)).epsilon(1e-12));
  }
}

TEST_CASE("monochromatic closed form gamma = sinc(kappa t)") {
  ModelParams mp;
  mp.kappa = 2.0;
  const auto prof = make_profile(Model::Monochromatic, mp);
  for (double t : {0.4, 1.0, 3.7}) {
    CHECK(prof.gamma(t) ==
          doctest::Approx(std::sin(2.0 * t) / (2.0 * t)).epsilon(1e-12));
  }
  CHECK(prof.gamma(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(prof.lambda() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("closed forms agree with the quadrature oracle") {
  ModelParams g21;
  g21.p = 2;
  g21.beta = 1.0;
  for (const auto& prof :
       {make_profile(Model::BargmannFock), make_profile(Model::GammaType, g21),
        make_profile(Model::BlackBody)}) {
    for (double t : {0.1, 0.7, 1.9, 4.0}) {
      const GammaValues c = prof.gamma_all(t);
      const GammaValues q = prof.gamma_quadrature(t);
      CHECK(c.g == doctest::Approx(q.g).epsilon(1e-8));
      CHECK(c.g1 == doctest::Approx(q.g1).epsilon(1e-7));
      CHECK(c.g2 == doctest::Approx(q.g2).epsilon(1e-6));
    }
  }
}

TEST_CASE("derivatives agree with central finite differences") {
  for (const auto& prof :
       {make_profile(Model::BargmannFock), make_profile(Model::BlackBody)}) {
    const double dh = 1e-5;
    for (double t : {0.5, 1.3, 2.8}) {
      const double fd1 = (prof.gamma(t + dh) - prof.gamma(t - dh)) / (2 * dh);
      const double fd2 =
          (prof.gamma(t + dh) - 2 * prof.gamma(t) + prof.gamma(t - dh)) /
          (dh * dh);
      CHECK(prof.gamma1(t) == doctest::Approx(fd1).epsilon(1e-6));
      CHECK(prof.gamma2(t) == doctest::Approx(fd2).epsilon(1e-4));
    }
  }
}

TEST_CASE("g1_over_t is finite at zero and equals -lambda there") {
  for (const auto& prof :
       {make_profile(Model::BargmannFock), make_profile(Model::Monochromatic),
        make_profile(Model::BlackBody)}) {
    const GammaValues g0 = prof.gamma_all(0.0);
    CHECK(g0.g1_over_t == doctest::Approx(-prof.lambda()).epsilon(1e-9));
    CHECK(g0.g2 == doctest::Approx(-prof.lambda()).epsilon(1e-9));
  }
}

TEST_CASE("Dr radial form equals the Cartesian form; Dr(0) = 4/3") {
  ModelParams g21;
  g21.p = 2;
  g21.beta = 1.0;
  for (const auto& prof :
       {make_profile(Model::BargmannFock), make_profile(Model::Monochromatic),
        make_profile(Model::GammaType, g21)}) {
    CHECK(prof.dr(0.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    for (const Vec3& x :
         {Vec3{0.8, 0.0, 0.0}, Vec3{0.3, -0.4, 0.5}, Vec3{1.1, 2.0, -0.7}}) {
      const double t =
          std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      CHECK(prof.dr(t) == doctest::Approx(prof.dr_cartesian(x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("normalized envelope: 1 at the origin, decay for BF") {
  const auto prof = make_profile(Model::BargmannFock);
  CHECK(prof.envelope_R({0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-10));
  const double r1 = prof.envelope_R({1.0, 0.5, 0.0});
  const double r2 = prof.envelope_R({3.0, 1.5, 0.0});
  CHECK(r1 < 1.0);
  CHECK(r2 < r1);
}

TEST_CASE("box covariogram: pointwise product formula and radialization") {
  const double n = 2.0;
  for (const Vec3& x : {Vec3{0.5, 1.0, -0.3}, Vec3{3.0, 0.2, 0.1}}) {
    double want = 1.0;
    for (int i = 0; i < 3; ++i)
      want *= std::max(0.0, 2.0 * n - std::abs(x[i]));
    CHECK(BoxCovariogram::pointwise(n, x) ==
          doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(BoxCovariogram::unit_profile(0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(BoxCovariogram::unit_profile(2.0 * std::sqrt(3.0) + 0.01) == 0.0);
  for (double s : {0.3, 0.9, 1.7, 2.6, 3.2}) {
    CHECK(BoxCovariogram::unit_profile(s) ==
          doctest::Approx(BoxCovariogram::unit_profile_direct(s))
              .epsilon(1e-7));
    CHECK(BoxCovariogram::radialized(n, s * n) ==
          doctest::Approx(BoxCovariogram::unit_profile(s)).epsilon(1e-10));
  }
}

TEST_CASE("unit profile is monotone decreasing") {
  double prev = 1.0 + 1e-12;
  for (double s = 0.0; s <= 2.0 * std::sqrt(3.0); s += 0.02) {
    const double c = BoxCovariogram::unit_profile(s);
    CHECK(c <= prev + 1e-9);
    prev = c;
  }
}
