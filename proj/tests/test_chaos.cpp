#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nodal3d/chaos.hpp"
#include "nodal3d/errors.hpp"

using namespace nodal3d;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

TEST_CASE("probabilists' Hermite values") {
  for (double x : {-1.7, 0.0, 0.4, 2.2}) {
    CHECK(hermite(0, x) == 1.0);
    CHECK(hermite(1, x) == x);
    CHECK(hermite(2, x) == doctest::Approx(x * x - 1).epsilon(1e-14));
    CHECK(hermite(3, x) == doctest::Approx(x * x * x - 3 * x).epsilon(1e-14));
    CHECK(hermite(4, x) ==
          doctest::Approx(x * x * x * x - 6 * x * x + 3).epsilon(1e-14));
  }
}

TEST_CASE("b coefficients: H_a(0)/(a! sqrt(2 pi)), odd orders vanish") {
  const double s = 1.0 / std::sqrt(2.0 * kPi);
  CHECK(coefficient_b(0) == doctest::Approx(s).epsilon(1e-14));
  CHECK(coefficient_b(1) == 0.0);
  CHECK(coefficient_b(2) == doctest::Approx(-s / 2.0).epsilon(1e-14));
  CHECK(coefficient_b(3) == 0.0);
  CHECK(coefficient_b(4) == doctest::Approx(s / 8.0).epsilon(1e-14));
}

TEST_CASE("a coefficients: a_0 = 2, a_{2e_k} = 1/3, mixed pairs vanish") {
  std::vector<Index6> idx;
  idx.push_back({0, 0, 0, 0, 0, 0});
  idx.push_back({2, 0, 0, 0, 0, 0});
  idx.push_back({0, 0, 0, 2, 0, 0});
  idx.push_back({1, 1, 0, 0, 0, 0});
  idx.push_back({0, 1, 0, 0, 0, 1});
  const auto est = coefficient_a_batch(idx, 600000, 2718);
  CHECK(std::abs(est[0].value - 2.0) < 4.0 * est[0].se);
  CHECK(std::abs(est[1].value - 1.0 / 3.0) < 4.0 * est[1].se);
  CHECK(std::abs(est[2].value - 1.0 / 3.0) < 4.0 * est[2].se);
  CHECK(std::abs(est[3].value) < 4.0 * est[3].se);
  CHECK(std::abs(est[4].value) < 4.0 * est[4].se);
  // single-index route agrees with the batch on the shared stream
  const McEstimate solo = coefficient_a_mc(idx[0], 600000, 2718);
  CHECK(solo.value == doctest::Approx(est[0].value).epsilon(1e-12));
}

TEST_CASE("c coefficients hit the closed targets") {
  const McEstimate c1 = coefficient_c({2, 0, 0, 0, 0, 0, 0, 0}, 1000000, 11);
  CHECK(c1.value == doctest::Approx(-1.0 / (2.0 * kPi)).epsilon(0.02));
  const McEstimate c3 = coefficient_c({0, 0, 2, 0, 0, 0, 0, 0}, 1000000, 12);
  CHECK(c3.value == doctest::Approx(1.0 / (6.0 * kPi)).epsilon(0.02));
}

TEST_CASE("Ybar covariance: identity within a point, skew cross block") {
  const CovarianceProfile prof(RadialSpectrum::make(Model::BargmannFock));
  const Cov16 s = ybar_covariance(prof, {0.6, -0.2, 0.9});
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      CHECK(s[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      CHECK(s[8 + i][8 + j] ==
            doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
      CHECK(s[i][8 + j] == doctest::Approx(s[8 + j][i]).epsilon(1e-14));
    }
  // value-gradient cross correlations are odd in x
  const Cov16 sm = ybar_covariance(prof, {-0.6, 0.2, -0.9});
  CHECK(sm[0][8 + 2] == doctest::Approx(-s[0][8 + 2]).epsilon(1e-12));
  CHECK(sm[0][8] == doctest::Approx(s[0][8]).epsilon(1e-12));
}

TEST_CASE("Mehler engine: single-slot closed form and gates") {
  const CovarianceProfile prof(RadialSpectrum::make(Model::BargmannFock));
  const Cov16 s = ybar_covariance(prof, {0.5, 0.3, -0.4});
  for (int slot : {0, 2, 5}) {
    const double rho = s[slot][8 + slot];
    for (int p = 1; p <= 4; ++p) {
      Index8 a{}, b{};
      a[slot] = p;
      b[slot] = p;
      CHECK(mehler_expectation(a, b, s) ==
            doctest::Approx(std::tgamma(p + 1.0) * std::pow(rho, p))
                .epsilon(1e-12));
      b[slot] = p == 4 ? 3 : p + 1;  // mismatched degrees vanish
      CHECK(mehler_expectation(a, b, s) == doctest::Approx(0.0));
    }
  }
  Index8 big{4, 3, 0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(mehler_expectation(big, big, s), IndexTooLarge);
  Cov16 bad = s;
  bad[3][3] = 1.5;
  Index8 one{1, 0, 0, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(mehler_expectation(one, one, bad), ParameterOutOfRange);
}

TEST_CASE("second-chaos kernel identity: sum c c Mehler = Dr / pi^2") {
  // exact c_{2e_k}: -1/(2pi) on the field slots, 1/(6pi) on gradient slots
  const CovarianceProfile prof(RadialSpectrum::make(Model::BargmannFock));
  std::array<double, 8> c{};
  c[0] = c[1] = -1.0 / (2.0 * kPi);
  for (int k = 2; k < 8; ++k) c[k] = 1.0 / (6.0 * kPi);
  for (const Vec3& x : {Vec3{0.4, 0.0, 0.0}, Vec3{0.7, -0.5, 0.3}}) {
    const Cov16 s = ybar_covariance(prof, x);
    double acc = 0.0;
    for (int k = 0; k < 8; ++k)
      for (int k2 = 0; k2 < 8; ++k2) {
        Index8 a{}, b{};
        a[k] = 2;
        b[k2] = 2;
        acc += c[k] * c[k2] * mehler_expectation(a, b, s);
      }
    const double t = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    CHECK(acc == doctest::Approx(prof.dr(t) / (kPi * kPi)).epsilon(1e-11));
  }
}

TEST_CASE("second-chaos variance: quadrature equals the spectral route") {
  ModelParams g21;
  g21.p = 2;
  g21.beta = 1.0;
  const auto bf = RadialSpectrum::make(Model::BargmannFock);
  const auto gt = RadialSpectrum::make(Model::GammaType, g21);
  const auto bb = RadialSpectrum::make(Model::BlackBody);
  // frozen closed forms: BF 5/(12 sqrt(pi)), GammaType(2,1) 21/256
  CHECK(v2_plancherel(bf) ==
        doctest::Approx(5.0 / (12.0 * std::sqrt(kPi))).epsilon(1e-10));
  CHECK(v2_plancherel(gt) == doctest::Approx(21.0 / 256.0).epsilon(1e-10));
  for (const auto& s : {bf, gt, bb}) {
    CHECK(v2_quadrature(CovarianceProfile(s)) ==
          doctest::Approx(v2_plancherel(s)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(v2_plancherel(RadialSpectrum::make(Model::Monochromatic)),
                  DivergentIntegral);
  ModelParams pl;
  pl.beta = 0.2;
  CHECK_THROWS_AS(v2_plancherel(RadialSpectrum::make(Model::PowerLaw, pl)),
                  DivergentIntegral);
  // the printed spectral form disagrees with both verified routes
  CHECK(std::abs(v2_plancherel_printed_form(bf) / v2_plancherel(bf) - 1.0) >
        0.5);
}

TEST_CASE("finite-volume variance approaches the limit from below O(1/n)") {
  const CovarianceProfile prof(RadialSpectrum::make(Model::BargmannFock));
  const double limit = v2_plancherel(prof.spectrum());
  const double v20 = var_I2_per_vol(prof, 20.0);
  const double v40 = var_I2_per_vol(prof, 40.0);
  CHECK(v20 < limit);
  CHECK(v40 < limit);
  // deficit halves when n doubles
  CHECK((limit - v20) / (limit - v40) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("monochromatic decay table") {
  const DecayTable t = monochromatic_decay({5, 20, 50});
  CHECK(t.integral_F == doctest::Approx(-kPi / 3.0).epsilon(1e-12));
  REQUIRE(t.rows.size() == 3);
  const DecayRow& last = t.rows.back();
  CHECK(last.t2 == doctest::Approx(2.0 * kPi).epsilon(0.02));
  CHECK(last.t3 == doctest::Approx(-2.0 * kPi).epsilon(0.1));
  // totals shrink: the three terms cancel as n grows
  CHECK(std::abs(t.rows[2].total) < std::abs(t.rows[0].total));
}

TEST_CASE("second chaos on a grid requires gradients and is finite") {
  const auto s = RadialSpectrum::make(Model::BargmannFock);
  const FieldRealization f(s, 128, 606);
  CHECK_THROWS(second_chaos_grid(f.sample_grid(1.0, 0.2, false), 1.0));
  const double v = second_chaos_grid(f.sample_grid(1.0, 0.2, true), 1.0);
  CHECK(std::isfinite(v));
  CHECK(std::abs(v) < 100.0);
}
