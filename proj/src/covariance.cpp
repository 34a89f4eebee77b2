#include "nodal3d/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "nodal3d/errors.hpp"
#include "nodal3d/quadrature.hpp"

namespace nodal3d {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

// sinc-family kernels: j0(u)=sin(u)/u and the derivatives entering the
// radial covariance. Series below u=0.5 (the direct forms cancel to
// O(u^-3) there).
struct SincKernels {
  double j0, j0p, j0pp, j0p_over_u;
};

SincKernels sinc_kernels(double u) {
  SincKernels k;
  if (u > 0.5) {
    const double s = std::sin(u), c = std::cos(u);
    const double u2 = u * u, u3 = u2 * u;
    k.j0 = s / u;
    k.j0p = c / u - s / u2;
    k.j0pp = -s / u - 2.0 * c / u2 + 2.0 * s / u3;
    k.j0p_over_u = k.j0p / u;
    return k;
  }
  // j0 = sum (-1)^m u^{2m}/(2m+1)!
  const double u2 = u * u;
  double term = 1.0;  // u^{2m}/(2m+1)! at m=0
  double j0 = 1.0, j0pu = 0.0, j0pp = 0.0;
  for (int m = 1; m <= 12; ++m) {
    term *= -u2 / ((2.0 * m) * (2.0 * m + 1.0));
    j0 += term;
  }
  // j0'(u)/u = sum_{m>=1} (-1)^m 2m u^{2m-2}/(2m+1)!
  double coef = -1.0 / 6.0;  // m = 1 value
  for (int m = 1; m <= 12; ++m) {
    j0pu += coef * 2.0 * m;
    j0pp += coef * 2.0 * m * (2.0 * m - 1.0);
    coef *= -u2 / ((2.0 * m + 2.0) * (2.0 * m + 3.0));
  }
  k.j0 = j0;
  k.j0p_over_u = j0pu;
  k.j0p = u * j0pu;
  k.j0pp = j0pp;
  return k;
}

// Gauss-Legendre 32 on [-1,1]
void gauss_legendre32(std::array<double, 32>& x, std::array<double, 32>& w) {
  // Newton iteration on Legendre roots; computed once
  const int n = 32;
  for (int i = 0; i < n / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

const std::array<double, 32>& gl32_x() {
  static const auto nodes = [] {
    std::array<double, 32> x, w;
    gauss_legendre32(x, w);
    return std::pair(x, w);
  }();
  return nodes.first;
}
const std::array<double, 32>& gl32_w() {
  static const auto nodes = [] {
    std::array<double, 32> x, w;
    gauss_legendre32(x, w);
    return std::pair(x, w);
  }();
  return nodes.second;
}

}  // namespace

CovarianceProfile::CovarianceProfile(RadialSpectrum spectrum)
    : spectrum_(std::move(spectrum)), lambda_(spectrum_.second_moment_lambda()) {
  if (spectrum_.model() == Model::GammaType) {
    const int p = spectrum_.params().p;
    const double beta = spectrum_.params().beta;
    gamma_poly_.assign(p, 0.0);
    double binom = p;  // C(p,1)
    for (int j = 1; j <= p; j += 2) {
      const int m = j - 1;
      const double sign = (m / 2) % 2 == 0 ? 1.0 : -1.0;
      gamma_poly_[m] = sign * binom / std::pow(beta, m);
      // C(p,j+2) from C(p,j)
      binom *= static_cast<double>(p - j) * (p - j - 1) /
               (static_cast<double>(j + 1) * (j + 2));
    }
  }
}

GammaValues CovarianceProfile::gamma_quadrature(double t) const {
  if (!spectrum_.has_density())
    throw QuadratureFailure("no radial density to integrate");
  const auto& s = spectrum_;
  const bool power_law = s.model() == Model::PowerLaw;
  const double beta = s.params().beta;

  // panel boundaries: quarter oscillation period of sin(rho t)
  const double rho_hi = s.rho_max();
  const double dl = std::min(rho_hi / 32.0, 0.5 * kPi / std::max(t, 1e-12));
  const auto npanels = static_cast<std::size_t>(std::ceil(rho_hi / dl));

  std::array<double, 4> acc{};
  for (std::size_t i = 0; i < npanels; ++i) {
    double a = rho_hi * static_cast<double>(i) / npanels;
    double b = rho_hi * static_cast<double>(i + 1) / npanels;
    if (power_law) {
      // substitution rho = v^{1/(1-beta)} absorbs the rho^{-beta} endpoint
      a = std::pow(a, 1.0 - beta);
      b = std::pow(b, 1.0 - beta);
    }
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int q = 0; q < 32; ++q) {
      const double v = c + h * gl32_x()[q];
      double rho, weight;
      if (power_law) {
        rho = std::pow(v, 1.0 / (1.0 - beta));
        weight = 1.0;  // (1-beta) density prefactor cancels the Jacobian
      } else {
        rho = v;
        weight = 4.0 * kPi * s.density(rho);
      }
      const auto k = sinc_kernels(rho * t);
      const double w = h * gl32_w()[q] * weight;
      acc[0] += w * k.j0;
      acc[1] += w * rho * k.j0p;
      acc[2] += w * rho * rho * k.j0pp;
      acc[3] += w * rho * rho * k.j0p_over_u;
    }
  }
  return {acc[0], acc[1], acc[2], acc[3]};
}

GammaValues CovarianceProfile::gamma_all(double t) const {
  switch (spectrum_.model()) {
    case Model::Monochromatic: {
      const double kappa = spectrum_.params().kappa;
      const auto k = sinc_kernels(kappa * t);
      return {k.j0, kappa * k.j0p, kappa * kappa * k.j0pp,
              kappa * kappa * k.j0p_over_u};
    }
    case Model::BargmannFock: {
      const double e = std::exp(-0.5 * t * t);
      return {e, -t * e, (t * t - 1.0) * e, -e};
    }
    case Model::GammaType: {
      const double beta = spectrum_.params().beta;
      const double p = spectrum_.params().p;
      const double b2 = beta * beta;
      const double base = 1.0 + t * t / b2;
      const double B = std::pow(base, -p);
      const double B1 = B / base, B2 = B1 / base;
      double A = 0.0, A1 = 0.0, A2 = 0.0, A1ot = 0.0;
      for (std::size_t m = gamma_poly_.size(); m-- > 0;) {
        const double am = gamma_poly_[m];
        if (am == 0.0) continue;
        const double md = static_cast<double>(m);
        A += am * std::pow(t, md);
        if (m >= 1) A1 += am * md * std::pow(t, md - 1.0);
        if (m >= 2) {
          A2 += am * md * (md - 1.0) * std::pow(t, md - 2.0);
          A1ot += am * md * std::pow(t, md - 2.0);
        }
      }
      const double Bp = -2.0 * p * t / b2 * B1;
      const double Bp_ot = -2.0 * p / b2 * B1;
      const double Bpp =
          -2.0 * p / b2 * B1 + 4.0 * p * (p + 1.0) * t * t / (b2 * b2) * B2;
      GammaValues gv;
      gv.g = A * B / p;
      gv.g1 = (A1 * B + A * Bp) / p;
      gv.g1_over_t = (A1ot * B + A * Bp_ot) / p;
      gv.g2 = (A2 * B + 2.0 * A1 * Bp + A * Bpp) / p;
      return gv;
    }
    default:
      return gamma_quadrature(t);
  }
}

double CovarianceProfile::dr(double t) const {
  const auto gv = gamma_all(t);
  const double l = lambda_;
  return gv.g * gv.g + 2.0 / (9.0 * l * l) * gv.g1_over_t * gv.g1_over_t -
         2.0 / (3.0 * l) * gv.g1 * gv.g1 +
         1.0 / (9.0 * l * l) * gv.g2 * gv.g2;
}

double CovarianceProfile::dr_cartesian(const Vec3& x) const {
  const double t = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  const auto gv = gamma_all(t);
  const double l = lambda_;
  double grad2 = 0.0, hess2 = 0.0;
  if (t < 1e-300) {
    hess2 = 3.0 * gv.g2 * gv.g2;
  } else {
    for (int i = 0; i < 3; ++i) {
      const double ri = gv.g1_over_t * x[i];
      grad2 += ri * ri;
      for (int j = 0; j < 3; ++j) {
        const double uij = x[i] * x[j] / (t * t);
        const double rij =
            (gv.g2 - gv.g1_over_t) * uij + (i == j ? gv.g1_over_t : 0.0);
        hess2 += rij * rij;
      }
    }
  }
  return gv.g * gv.g - 2.0 / (3.0 * l) * grad2 + 1.0 / (9.0 * l * l) * hess2;
}

double CovarianceProfile::envelope_R(const Vec3& x) const {
  const double t = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  const auto gv = gamma_all(t);
  const double sl = std::sqrt(lambda_);
  double R = std::abs(gv.g);
  if (t < 1e-300) {
    return std::max(R, std::abs(gv.g2) / lambda_);
  }
  for (int i = 0; i < 3; ++i) {
    R = std::max(R, std::abs(gv.g1_over_t * x[i]) / sl);
    for (int j = 0; j < 3; ++j) {
      const double uij = x[i] * x[j] / (t * t);
      const double rij =
          (gv.g2 - gv.g1_over_t) * uij + (i == j ? gv.g1_over_t : 0.0);
      R = std::max(R, std::abs(rij) / lambda_);
    }
  }
  return R;
}

// ---------------------------------------------------------------------------
// Box covariogram

double BoxCovariogram::pointwise(double n, const Vec3& x) {
  double v = 1.0;
  for (int i = 0; i < 3; ++i) v *= std::max(2.0 * n - std::abs(x[i]), 0.0);
  return v;
}

// Spherical average of the unit-box overlap, first octant only (the
// integrand depends on |u_i|). Splits in z and phi exactly at the radii
// where a factor's support ends, so every Gauss panel sees a trig
// polynomial.
double BoxCovariogram::unit_profile_direct(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 2.0 * std::sqrt(3.0)) return 0.0;

  auto inner_phi = [s](double z) {
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double zfac = std::max(2.0 - s * z, 0.0);
    if (zfac == 0.0) return 0.0;
    double phi_lo = 0.0, phi_hi = 0.5 * kPi;
    if (s * r > 2.0) {
      const double q = 2.0 / (s * r);
      phi_lo = std::acos(q);   // cos factor support: phi > acos(q)
      phi_hi = std::asin(q);   // sin factor support: phi < asin(q)
      if (phi_lo >= phi_hi) return 0.0;
    }
    const double c = 0.5 * (phi_lo + phi_hi), h = 0.5 * (phi_hi - phi_lo);
    double acc = 0.0;
    for (int q = 0; q < 32; ++q) {
      const double phi = c + h * gl32_x()[q];
      const double f1 = std::max(2.0 - s * r * std::cos(phi), 0.0);
      const double f2 = std::max(2.0 - s * r * std::sin(phi), 0.0);
      acc += gl32_w()[q] * f1 * f2;
    }
    return h * acc * zfac / 8.0;
  };

  // outer z breakpoints: z factor endpoint and the radii where s*r crosses
  // 2 and 2*sqrt(2)
  const double z_top = std::min(1.0, 2.0 / s);
  std::vector<double> brk{0.0, z_top};
  if (s > 2.0) brk.push_back(std::sqrt(1.0 - 4.0 / (s * s)));
  if (s > 2.0 * std::sqrt(2.0)) brk.push_back(std::sqrt(1.0 - 8.0 / (s * s)));
  std::sort(brk.begin(), brk.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    const double a = brk[i], b = brk[i + 1];
    if (b - a < 1e-15) continue;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int q = 0; q < 32; ++q)
      total += h * gl32_w()[q] * inner_phi(c + h * gl32_x()[q]);
  }
  return total * 2.0 / kPi;
}

namespace {

struct UnitProfileTable {
  std::vector<double> s, v, slope;

  UnitProfileTable() {
    // non-uniform grid with nodes pinned at the kink radii 2 and 2*sqrt(2)
    const double s1 = 2.0, s2 = 2.0 * std::sqrt(2.0), s3 = 2.0 * std::sqrt(3.0);
    auto append = [this](double a, double b, int m, bool first) {
      for (int i = first ? 0 : 1; i <= m; ++i)
        s.push_back(a + (b - a) * static_cast<double>(i) / m);
    };
    append(0.0, s1, 1024, true);
    append(s1, s2, 512, false);
    append(s2, s3, 512, false);
    v.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      v[i] = BoxCovariogram::unit_profile_direct(s[i]);
    v.back() = 0.0;

    // Fritsch-Carlson slopes
    const std::size_t n = s.size();
    std::vector<double> sec(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      sec[i] = (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
    slope.assign(n, 0.0);
    slope[0] = sec[0];
    slope[n - 1] = sec[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
      slope[i] = sec[i - 1] * sec[i] <= 0.0
                     ? 0.0
                     : 2.0 * sec[i - 1] * sec[i] / (sec[i - 1] + sec[i]);
  }

  double eval(double x) const {
    if (x <= 0.0) return 1.0;
    if (x >= s.back()) return 0.0;
    const auto it = std::upper_bound(s.begin(), s.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - s.begin()) - 1;
    const double h = s[i + 1] - s[i];
    const double t = (x - s[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * h * slope[i] +
           (-2 * t3 + 3 * t2) * v[i + 1] + (t3 - t2) * h * slope[i + 1];
  }
};

const UnitProfileTable& unit_table() {
  static const UnitProfileTable table;
  return table;
}

}  // namespace

double BoxCovariogram::unit_profile(double s) { return unit_table().eval(s); }

double BoxCovariogram::radialized(double n, double rho) {
  if (!(n > 0.0)) throw ParameterOutOfRange("box halfwidth must be positive");
  return unit_profile(rho / n);
}

}  // namespace nodal3d
