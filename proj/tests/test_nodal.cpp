#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "nodal3d/nodal.hpp"

using namespace nodal3d;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

GridSample fill(double n, double h,
                const std::function<double(double, double, double)>& u,
                const std::function<double(double, double, double)>& v) {
  GridSample g;
  g.n = n;
  g.h = h;
  const int steps = static_cast<int>(std::lround(2.0 * n / h));
  for (auto& d : g.dims) d = steps + 1;
  g.xi.resize(static_cast<std::size_t>(steps + 1) * (steps + 1) * (steps + 1));
  g.eta.resize(g.xi.size());
  for (int l = 0; l <= steps; ++l)
    for (int j = 0; j <= steps; ++j)
      for (int i = 0; i <= steps; ++i) {
        const std::size_t idx = g.vertex_index(i, j, l);
        g.xi[idx] = u(g.coord(i), g.coord(j), g.coord(l));
        g.eta[idx] = v(g.coord(i), g.coord(j), g.coord(l));
      }
  return g;
}
}  // namespace

TEST_CASE("offset axis line: exact length 2") {
  const GridSample g =
      fill(1.0, 0.1, [](double x, double, double) { return x - 0.013; },
           [](double, double y, double) { return y - 0.029; });
  const NodalResult r = nodal_length(g);
  CHECK(r.length == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("tilted line in general position: exact for linear fields") {
  // {x = 0.3 z + 0.013, y = -0.2 z + 0.007}, z in [-1, 1]
  const GridSample g = fill(
      1.0, 0.125,
      [](double x, double, double z) { return x - 0.3 * z - 0.013; },
      [](double, double y, double z) { return y + 0.2 * z - 0.007; });
  const double want = 2.0 * std::sqrt(1.0 + 0.09 + 0.04);
  CHECK(nodal_length(g).length == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("unit circle within 1% at h = 0.02") {
  const GridSample g = fill(
      1.5, 0.02,
      [](double x, double y, double) { return x * x + y * y - 1.0; },
      [](double, double, double z) { return z + 0.0137; });
  CHECK(nodal_length(g).length == doctest::Approx(2.0 * kPi).epsilon(0.01));
}

TEST_CASE("helix within 1% at h = 0.02") {
  const GridSample g = fill(
      1.5, 0.02,
      [](double x, double, double z) { return x - std::cos(z); },
      [](double, double y, double z) { return y - std::sin(z); });
  CHECK(nodal_length(g).length ==
        doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(0.01));
}

TEST_CASE("circle refinement errors decrease monotonically") {
  auto u = [](double x, double y, double) { return x * x + y * y - 1.0; };
  auto v = [](double, double, double z) { return z + 0.0137; };
  double prev = 1e300;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    const double err =
        std::abs(nodal_length(fill(1.5, h, u, v)).length - 2.0 * kPi);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("segments: per-segment lengths sum to the total") {
  const GridSample g = fill(
      1.2, 0.1,
      [](double x, double y, double z) { return x + 0.2 * y - 0.1 * z - 0.03; },
      [](double x, double y, double) { return y - 0.3 * x + 0.017; });
  const NodalResult r = nodal_length(g, true);
  CHECK(r.segments == r.segs.size());
  double acc = 0.0;
  for (const auto& s : r.segs) {
    const double dx = s.a[0] - s.b[0], dy = s.a[1] - s.b[1],
                 dz = s.a[2] - s.b[2];
    acc += std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  CHECK(acc == doctest::Approx(r.length).epsilon(1e-12));
  CHECK(r.cells > 0);
  CHECK(r.tets == 6 * r.cells);
}

TEST_CASE("empty intersection yields zero length") {
  const GridSample g =
      fill(1.0, 0.2, [](double, double, double) { return 1.0; },
           [](double, double, double) { return -2.0; });
  CHECK(nodal_length(g).length == 0.0);
}

TEST_CASE("random field: deterministic and resolution-stable") {
  const auto s = RadialSpectrum::make(Model::BargmannFock);
  const FieldRealization f(s, 256, 4242);
  const double l1 = nodal_length(f.sample_grid(1.5, 0.1)).length;
  const double l2 = nodal_length(f.sample_grid(1.5, 0.1)).length;
  CHECK(l1 == l2);
  const auto study = length_convergence_study(f, 1.5, {0.2, 0.1, 0.05});
  REQUIRE(study.size() == 3);
  // h = 0.1 and h = 0.05 should agree to a few percent for this field
  CHECK(study[2] == doctest::Approx(study[1]).epsilon(0.06));
  CHECK(study[1] == doctest::Approx(l1).epsilon(1e-14));
}
