#include "nodal3d/synthesis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "nodal3d/errors.hpp"

namespace nodal3d {

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676656;
// cap on stored doubles per grid (values + optional gradients)
constexpr std::size_t kMaxGridDoubles = std::size_t(1) << 28;

// one explicit sincos for both the pointwise and the grid path: compilers
// fuse adjacent sin/cos pairs into sincos only sometimes, and glibc sincos
// can differ from separate calls by an ulp, which would break the
// bit-exactness contract between evaluate() and sample_grid()
inline void sincos_pair(double x, double& s, double& c) {
#if defined(__GNUC__) && defined(__linux__)
  ::sincos(x, &s, &c);
#else
  s = std::sin(x);
  c = std::cos(x);
#endif
}
}  // namespace

template <typename S>
void FieldRealization::draw_atoms(const S& s, std::uint64_t seed) {
  seed_ = seed;
  Rng rng(seed);
  k_xi_.resize(atoms_);
  phase_xi_.resize(atoms_);
  k_eta_.resize(atoms_);
  phase_eta_.resize(atoms_);
  for (int a = 0; a < atoms_; ++a) {
    k_xi_[a] = s.sample_wavevector(rng);
    phase_xi_[a] = rng.uniform(0.0, kTwoPi);
  }
  for (int a = 0; a < atoms_; ++a) {
    k_eta_[a] = s.sample_wavevector(rng);
    phase_eta_[a] = rng.uniform(0.0, kTwoPi);
  }
}

FieldRealization::FieldRealization(const RadialSpectrum& s, int atoms,
                                   std::uint64_t seed)
    : atoms_(atoms) {
  if (atoms < 1) throw ParameterOutOfRange("atom count must be >= 1");
  draw_atoms(s, seed);
}

FieldRealization::FieldRealization(const AnisotropicSpectrum& s, int atoms,
                                   std::uint64_t seed)
    : atoms_(atoms) {
  if (atoms < 1) throw ParameterOutOfRange("atom count must be >= 1");
  draw_atoms(s, seed);
}

namespace {

// One field component at one point: sum of cos(<k,x>+theta) atoms evaluated
// through the split cos(k1 x1 + theta) * e^{i k2 x2} * e^{i k3 x3} product so
// the grid path below can reuse the identical arithmetic per vertex.
void accumulate_point(const std::vector<Vec3>& ks,
                      const std::vector<double>& phases, const Vec3& x,
                      double& value, Vec3& grad) {
  double acc = 0.0, g0 = 0.0, g1 = 0.0, g2 = 0.0;
  const int m = static_cast<int>(ks.size());
  for (int a = 0; a < m; ++a) {
    const Vec3& k = ks[a];
    double pr, pi, c1, s1, c2, s2, c3, s3;
    sincos_pair(phases[a], pi, pr);
    sincos_pair(k[0] * x[0], s1, c1);
    sincos_pair(k[1] * x[1], s2, c2);
    sincos_pair(k[2] * x[2], s3, c3);
    const double tr = pr * c1 - pi * s1;
    const double ti = pr * s1 + pi * c1;
    const double ur = c2 * c3 - s2 * s3;
    const double ui = c2 * s3 + s2 * c3;
    const double wr = tr * ur - ti * ui;  // cos(<k,x>+theta)
    const double wi = tr * ui + ti * ur;  // sin(<k,x>+theta)
    acc += wr;
    g0 += k[0] * wi;
    g1 += k[1] * wi;
    g2 += k[2] * wi;
  }
  const double scale = std::sqrt(2.0 / m);
  value = scale * acc;
  grad = {-scale * g0, -scale * g1, -scale * g2};
}

// Grid accumulation for one component. Per-vertex accumulation runs in atom
// order with the same per-atom expressions as accumulate_point, so grid
// values are bit-identical to evaluate() at the grid coordinates.
void accumulate_grid(const std::vector<Vec3>& ks,
                     const std::vector<double>& phases, const GridSample& g,
                     double* value, double* grad[3]) {
  const int m = static_cast<int>(ks.size());
  const int n0 = g.dims[0], n1 = g.dims[1], n2 = g.dims[2];

  // per-atom axis tables: T = phase factor times e^{i k0 x}, plus raw
  // exponentials along y and z
  std::vector<double> T(static_cast<std::size_t>(m) * n0 * 2);
  std::vector<double> E2(static_cast<std::size_t>(m) * n1 * 2);
  std::vector<double> E3(static_cast<std::size_t>(m) * n2 * 2);
  for (int a = 0; a < m; ++a) {
    const Vec3& k = ks[a];
    double pr, pi;
    sincos_pair(phases[a], pi, pr);
    double* t = &T[static_cast<std::size_t>(a) * n0 * 2];
    for (int i = 0; i < n0; ++i) {
      double c1, s1;
      sincos_pair(k[0] * g.coord(i), s1, c1);
      t[2 * i] = pr * c1 - pi * s1;
      t[2 * i + 1] = pr * s1 + pi * c1;
    }
    double* e2 = &E2[static_cast<std::size_t>(a) * n1 * 2];
    for (int j = 0; j < n1; ++j)
      sincos_pair(k[1] * g.coord(j), e2[2 * j + 1], e2[2 * j]);
    double* e3 = &E3[static_cast<std::size_t>(a) * n2 * 2];
    for (int l = 0; l < n2; ++l)
      sincos_pair(k[2] * g.coord(l), e3[2 * l + 1], e3[2 * l]);
  }

  const bool want_grad = grad[0] != nullptr;
  for (int l = 0; l < n2; ++l) {
    for (int j = 0; j < n1; ++j) {
      double* row = value + (static_cast<std::size_t>(l) * n1 + j) * n0;
      double* grow[3] = {nullptr, nullptr, nullptr};
      if (want_grad)
        for (int d = 0; d < 3; ++d)
          grow[d] = grad[d] + (static_cast<std::size_t>(l) * n1 + j) * n0;
      for (int a = 0; a < m; ++a) {
        const double c2 = E2[(static_cast<std::size_t>(a) * n1 + j) * 2];
        const double s2 = E2[(static_cast<std::size_t>(a) * n1 + j) * 2 + 1];
        const double c3 = E3[(static_cast<std::size_t>(a) * n2 + l) * 2];
        const double s3 = E3[(static_cast<std::size_t>(a) * n2 + l) * 2 + 1];
        const double ur = c2 * c3 - s2 * s3;
        const double ui = c2 * s3 + s2 * c3;
        const double* t = &T[static_cast<std::size_t>(a) * n0 * 2];
        if (!want_grad) {
          for (int i = 0; i < n0; ++i)
            row[i] += t[2 * i] * ur - t[2 * i + 1] * ui;
        } else {
          const double k0 = ks[a][0], k1 = ks[a][1], k2 = ks[a][2];
          for (int i = 0; i < n0; ++i) {
            const double tr = t[2 * i], ti = t[2 * i + 1];
            row[i] += tr * ur - ti * ui;
            const double wi = tr * ui + ti * ur;
            grow[0][i] += k0 * wi;
            grow[1][i] += k1 * wi;
            grow[2][i] += k2 * wi;
          }
        }
      }
    }
  }

  const double scale = std::sqrt(2.0 / m);
  const std::size_t nv =
      static_cast<std::size_t>(n0) * n1 * n2;
  for (std::size_t v = 0; v < nv; ++v) value[v] *= scale;
  if (want_grad)
    for (int d = 0; d < 3; ++d)
      for (std::size_t v = 0; v < nv; ++v) grad[d][v] *= -scale;
}

}  // namespace

FieldRealization::PointValue FieldRealization::evaluate(const Vec3& x) const {
  PointValue out;
  accumulate_point(k_xi_, phase_xi_, x, out.xi, out.grad_xi);
  accumulate_point(k_eta_, phase_eta_, x, out.eta, out.grad_eta);
  return out;
}

GridSample FieldRealization::sample_grid(double n, double h,
                                         bool gradients) const {
  if (!(n > 0.0) || !(h > 0.0))
    throw ParameterOutOfRange("grid needs n > 0 and h > 0");
  const double steps = 2.0 * n / h;
  if (steps > 4e3) throw GridTooLarge("more than 4000 cells per axis");
  const int nd = static_cast<int>(std::lround(steps)) + 1;

  GridSample g;
  g.n = n;
  g.h = h;
  g.dims = {nd, nd, nd};
  g.seed = seed_;
  g.has_gradients = gradients;
  const std::size_t nv = static_cast<std::size_t>(nd) * nd * nd;
  if (nv * (gradients ? 8 : 2) > kMaxGridDoubles)
    throw GridTooLarge("grid of " + std::to_string(nv) +
                       " vertices exceeds the storage cap");

  g.xi.assign(nv, 0.0);
  g.eta.assign(nv, 0.0);
  double* gxi[3] = {nullptr, nullptr, nullptr};
  double* geta[3] = {nullptr, nullptr, nullptr};
  if (gradients) {
    for (int d = 0; d < 3; ++d) {
      g.grad_xi[d].assign(nv, 0.0);
      g.grad_eta[d].assign(nv, 0.0);
      gxi[d] = g.grad_xi[d].data();
      geta[d] = g.grad_eta[d].data();
    }
  }
  accumulate_grid(k_xi_, phase_xi_, g, g.xi.data(), gxi);
  accumulate_grid(k_eta_, phase_eta_, g, g.eta.data(), geta);
  return g;
}

std::vector<std::vector<double>> exact_gaussian_oracle(
    const CovarianceProfile& profile, const std::vector<Vec3>& points,
    int draws, std::uint64_t seed) {
  const int n = static_cast<int>(points.size());
  if (n == 0 || n > 4000)
    throw ParameterOutOfRange("oracle point count must be in [1, 4000]");
  Eigen::MatrixXd C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const Vec3 d{points[i][0] - points[j][0], points[i][1] - points[j][1],
                   points[i][2] - points[j][2]};
      const double t =
          std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      C(i, j) = C(j, i) = profile.gamma(t);
    }

  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
  for (;;) {
    Eigen::MatrixXd Cj = C;
    if (jitter > 0.0) Cj.diagonal().array() += jitter;
    llt.compute(Cj);
    if (llt.info() == Eigen::Success) break;
    jitter = jitter == 0.0 ? 1e-12 : jitter * 10.0;
    if (jitter > 1e-8)
      throw NotPositiveDefinite(
          "covariance matrix is not positive definite even with 1e-8 jitter");
  }
  const Eigen::MatrixXd L = llt.matrixL();

  Rng rng(seed);
  std::vector<std::vector<double>> out(draws, std::vector<double>(n));
  Eigen::VectorXd z(n);
  for (int d = 0; d < draws; ++d) {
    for (int i = 0; i < n; ++i) z(i) = rng.normal();
    const Eigen::VectorXd x = L * z;
    for (int i = 0; i < n; ++i) out[d][i] = x(i);
  }
  return out;
}

void export_grid_csv(const GridSample& g, const std::string& csv_path,
                     const std::string& sidecar_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw IoError("cannot open " + csv_path);
  csv << "i,j,l,xi,eta\n";
  char buf[128];
  for (int l = 0; l < g.dims[2]; ++l)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const std::size_t v = g.vertex_index(i, j, l);
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g\n", i, j, l,
                      g.xi[v], g.eta[v]);
        csv << buf;
      }
  if (!csv.good()) throw IoError("write failed: " + csv_path);

  std::ofstream side(sidecar_path);
  if (!side) throw IoError("cannot open " + sidecar_path);
  char meta[256];
  std::snprintf(meta, sizeof meta,
                "{\n  \"n\": %.17g,\n  \"h\": %.17g,\n  \"dims\": [%d, %d, "
                "%d],\n  \"seed\": %llu\n}\n",
                g.n, g.h, g.dims[0], g.dims[1], g.dims[2],
                static_cast<unsigned long long>(g.seed));
  side << meta;
  if (!side.good()) throw IoError("write failed: " + sidecar_path);
}

}  // namespace nodal3d
