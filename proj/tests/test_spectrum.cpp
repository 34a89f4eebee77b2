#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nodal3d/errors.hpp"
#include "nodal3d/spectrum.hpp"

using namespace nodal3d;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

RadialSpectrum make_pl(double beta) {
  ModelParams mp;
  mp.beta = beta;
  return RadialSpectrum::make(Model::PowerLaw, mp);
}
}  // namespace

TEST_CASE("model names round-trip, unknown name rejected") {
  for (Model m : {Model::Monochromatic, Model::BargmannFock, Model::GammaType,
                  Model::BlackBody, Model::PowerLaw})
    CHECK(model_from_name(model_name(m)) == m);
  CHECK_THROWS_AS(model_from_name("no_such_model"), ParameterOutOfRange);
}

TEST_CASE("total wavevector mass is 1 for every catalog model") {
  std::vector<RadialSpectrum> specs;
  ModelParams mono2;
  mono2.kappa = 2.0;
  specs.push_back(RadialSpectrum::make(Model::Monochromatic));
  specs.push_back(RadialSpectrum::make(Model::Monochromatic, mono2));
  specs.push_back(RadialSpectrum::make(Model::BargmannFock));
  ModelParams g21;
  g21.p = 2;
  g21.beta = 1.0;
  specs.push_back(RadialSpectrum::make(Model::GammaType, g21));
  specs.push_back(RadialSpectrum::make(Model::BlackBody));
  specs.push_back(make_pl(0.1));
  specs.push_back(make_pl(0.2));
  for (const auto& s : specs)
    CHECK(s.normalization_mass() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("second spectral moment: closed values") {
  // frozen: monochromatic kappa^2/3, BargmannFock 1, black body 40 pi^2/63,
  // power law (1-beta)/(3(3-beta))
  CHECK(RadialSpectrum::make(Model::Monochromatic).second_moment_lambda() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  ModelParams mono2;
  mono2.kappa = 2.0;
  CHECK(RadialSpectrum::make(Model::Monochromatic, mono2)
            .second_moment_lambda() ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(RadialSpectrum::make(Model::BargmannFock).second_moment_lambda() ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(RadialSpectrum::make(Model::BlackBody).second_moment_lambda() ==
        doctest::Approx(40.0 * kPi * kPi / 63.0).epsilon(1e-8));
  for (double beta : {0.1, 0.2, 0.5})
    CHECK(make_pl(beta).second_moment_lambda() ==
          doctest::Approx((1.0 - beta) / (3.0 * (3.0 - beta)))
              .epsilon(1e-10));
}

TEST_CASE("lambda equals the sampled gradient variance E|k|^2 / 3") {
  for (const auto& s :
       {RadialSpectrum::make(Model::BargmannFock),
        RadialSpectrum::make(Model::BlackBody), make_pl(0.2)}) {
    Rng rng(99);
    const long N = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < N; ++i) {
      const Vec3 k = s.sample_wavevector(rng);
      const double q = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) / 3.0;
      sum += q;
      sumsq += q * q;
    }
    const double mean = sum / N;
    const double se = std::sqrt((sumsq / N - mean * mean) / N);
    CHECK(std::abs(mean - s.second_moment_lambda()) < 5.0 * se);
  }
}

TEST_CASE("radial CDF is a CDF and matches the sampler") {
  for (const auto& s :
       {RadialSpectrum::make(Model::BargmannFock),
        RadialSpectrum::make(Model::BlackBody), make_pl(0.15)}) {
    double prev = 0.0;
    for (double rho = 0.0; rho <= s.rho_max(); rho += s.rho_max() / 64) {
      const double c = s.radial_cdf(rho);
      CHECK(c >= prev - 1e-14);
      CHECK(c <= 1.0 + 1e-12);
      prev = c;
    }
    Rng rng(7);
    const long N = 100000;
    const double probe = 0.5 * s.rho_max();
    long below = 0;
    for (long i = 0; i < N; ++i)
      if (s.sample_rho(rng) <= probe) ++below;
    const double p = s.radial_cdf(probe);
    const double se = std::sqrt(p * (1.0 - p) / N);
    CHECK(std::abs(static_cast<double>(below) / N - p) < 5.0 * se);
  }
}

TEST_CASE("monochromatic atom: no density, exact modulus") {
  const auto s = RadialSpectrum::make(Model::Monochromatic);
  CHECK(!s.has_density());
  CHECK_THROWS(s.density(1.0));
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec3 k = s.sample_wavevector(rng);
    CHECK(std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("power-law scaling regime flag") {
  CHECK(make_pl(0.1).power_law_scaling_regime());
  CHECK(make_pl(0.2).power_law_scaling_regime());
  CHECK(!make_pl(0.5).power_law_scaling_regime());
  CHECK(!RadialSpectrum::make(Model::BargmannFock).power_law_scaling_regime());
}

TEST_CASE("anisotropic transform diag(1,1,2): eigenvalues (l, l, 4l)") {
  const auto base = RadialSpectrum::make(Model::BargmannFock);
  const AnisotropicSpectrum a(base, diag_matrix(1.0, 1.0, 2.0));
  const SpectralMoments m = second_moment(a);
  const double lam = base.second_moment_lambda();
  CHECK(m.eigenvalues[0] == doctest::Approx(lam).epsilon(1e-8));
  CHECK(m.eigenvalues[1] == doctest::Approx(lam).epsilon(1e-8));
  CHECK(m.eigenvalues[2] == doctest::Approx(4.0 * lam).epsilon(1e-8));
  const SpectralMoments iso = second_moment(base);
  CHECK(iso.lambda == doctest::Approx(lam).epsilon(1e-10));
  CHECK(iso.matrix[0][0] == doctest::Approx(lam).epsilon(1e-8));
  CHECK(std::abs(iso.matrix[0][1]) < 1e-10);
}

TEST_CASE("sampler determinism by seed") {
  const auto s = RadialSpectrum::make(Model::BlackBody);
  Rng a(42), b(42), c(43);
  const Vec3 ka = s.sample_wavevector(a);
  const Vec3 kb = s.sample_wavevector(b);
  const Vec3 kc = s.sample_wavevector(c);
  CHECK(ka == kb);
  CHECK(ka != kc);
}
