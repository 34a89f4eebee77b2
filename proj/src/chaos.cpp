#include "nodal3d/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nodal3d/errors.hpp"
#include "nodal3d/quadrature.hpp"

namespace nodal3d {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kSqrt3 = 1.73205080756887729352744634151;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace

double hermite(int n, double x) {
  if (n < 0) throw ParameterOutOfRange("hermite order must be >= 0");
  if (n == 0) return 1.0;
  double h0 = 1.0, h1 = x;
  for (int k = 2; k <= n; ++k) {
    const double h2 = x * h1 - (k - 1) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double hermite_multi(const Index8& alpha, const std::array<double, 8>& y) {
  double p = 1.0;
  for (int i = 0; i < 8; ++i) p *= hermite(alpha[i], y[i]);
  return p;
}

double coefficient_b(int order) {
  if (order < 0) throw ParameterOutOfRange("order must be >= 0");
  return hermite(order, 0.0) / (factorial(order) * std::sqrt(2.0 * kPi));
}

std::vector<McEstimate> coefficient_a_batch(const std::vector<Index6>& idx,
                                            long samples,
                                            std::uint64_t seed) {
  if (samples < 100000)
    throw ParameterOutOfRange("a-coefficient MC needs >= 1e5 samples");
  const std::size_t m = idx.size();
  std::vector<double> inv_fact(m);
  for (std::size_t k = 0; k < m; ++k) {
    double f = 1.0;
    for (int d : idx[k]) {
      if (d < 0) throw ParameterOutOfRange("negative index entry");
      f *= factorial(d);
    }
    inv_fact[k] = 1.0 / f;
  }

  Rng rng(seed);
  std::vector<double> sum(m, 0.0), sumsq(m, 0.0);
  for (long it = 0; it < samples; ++it) {
    double n[6];
    for (auto& v : n) v = rng.normal();
    const double w0 = n[1] * n[5] - n[2] * n[4];
    const double w1 = n[2] * n[3] - n[0] * n[5];
    const double w2 = n[0] * n[4] - n[1] * n[3];
    const double wn = std::sqrt(w0 * w0 + w1 * w1 + w2 * w2);
    for (std::size_t k = 0; k < m; ++k) {
      double h = 1.0;
      for (int s = 0; s < 6; ++s)
        if (idx[k][s]) h *= hermite(idx[k][s], n[s]);
      const double v = wn * h * inv_fact[k];
      sum[k] += v;
      sumsq[k] += v * v;
    }
  }

  std::vector<McEstimate> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    out[k].samples = samples;
    out[k].value = sum[k] / samples;
    out[k].se = std::sqrt(
        (sumsq[k] / samples - out[k].value * out[k].value) / samples);
  }
  return out;
}

McEstimate coefficient_a_mc(const Index6& idx, long samples,
                            std::uint64_t seed) {
  return coefficient_a_batch({idx}, samples, seed)[0];
}

McEstimate coefficient_c(const Index8& alpha, long samples,
                         std::uint64_t seed) {
  const double bb = coefficient_b(alpha[0]) * coefficient_b(alpha[1]);
  Index6 tail{};
  for (int i = 0; i < 6; ++i) tail[i] = alpha[2 + i];
  McEstimate a = coefficient_a_mc(tail, samples, seed);
  McEstimate c;
  c.samples = a.samples;
  c.value = bb * a.value;
  c.se = std::abs(bb) * a.se;
  return c;
}

Cov16 ybar_covariance(const CovarianceProfile& profile, const Vec3& x) {
  const double t = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  const GammaValues gv = profile.gamma_all(t);
  const double lam = profile.lambda();
  const double sl = std::sqrt(lam);

  double r1[3], r2[3][3];
  const Vec3 u = t > 1e-300 ? Vec3{x[0] / t, x[1] / t, x[2] / t} : Vec3{};
  for (int i = 0; i < 3; ++i) {
    r1[i] = gv.g1_over_t * x[i];
    for (int j = 0; j < 3; ++j)
      r2[i][j] = (gv.g2 - gv.g1_over_t) * u[i] * u[j] +
                 (i == j ? gv.g1_over_t : 0.0);
  }

  // cross block B[i][j] = Cov(Ybar_i(0), Ybar_j(x))
  double B[8][8] = {};
  B[0][0] = B[1][1] = gv.g;
  for (int j = 0; j < 3; ++j) {
    B[0][2 + j] = r1[j] / sl;
    B[1][5 + j] = r1[j] / sl;
    B[2 + j][0] = -r1[j] / sl;
    B[5 + j][1] = -r1[j] / sl;
    for (int i = 0; i < 3; ++i) {
      B[2 + i][2 + j] = -r2[i][j] / lam;
      B[5 + i][5 + j] = -r2[i][j] / lam;
    }
  }

  Cov16 sigma{};
  for (int i = 0; i < 8; ++i) {
    sigma[i][i] = 1.0;
    sigma[8 + i][8 + i] = 1.0;
  }
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      sigma[i][8 + j] = B[i][j];
      sigma[8 + j][i] = B[i][j];
    }
  return sigma;
}

namespace {

// recursive enumeration of d matrices: distribute column j of weight
// alpha_j over rows, respecting remaining row budgets beta
void mehler_recurse(const double B[8][8], const Index8& alpha, int rem_beta[8],
                    int col, int row, int left, double partial, double& acc) {
  if (left == 0) {
    int c = col + 1;
    while (c < 8 && alpha[c] == 0) ++c;
    if (c == 8) {
      int tot = 0;
      for (int i = 0; i < 8; ++i) tot += rem_beta[i];
      if (tot == 0) acc += partial;
      return;
    }
    mehler_recurse(B, alpha, rem_beta, c, 0, alpha[c], partial, acc);
    return;
  }
  if (row == 8) return;
  const int cap = std::min(left, rem_beta[row]);
  double pw = 1.0, fact = 1.0;
  for (int d = 0; d <= cap; ++d) {
    if (d > 0) {
      pw *= B[row][col];
      fact *= d;
    }
    rem_beta[row] -= d;
    mehler_recurse(B, alpha, rem_beta, col, row + 1, left - d,
                   partial * pw / fact, acc);
    rem_beta[row] += d;
  }
}

}  // namespace

double mehler_expectation(const Index8& alpha, const Index8& beta,
                          const Cov16& sigma) {
  const int qa = std::accumulate(alpha.begin(), alpha.end(), 0);
  const int qb = std::accumulate(beta.begin(), beta.end(), 0);
  if (qa != qb) return 0.0;
  if (qa > 6)
    throw IndexTooLarge("mehler enumeration gated at |alpha| <= 6, got " +
                        std::to_string(qa));
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if ((i / 8) == (j / 8) &&
          std::abs(sigma[i][j] - (i == j ? 1.0 : 0.0)) > 1e-8)
        throw ParameterOutOfRange(
            "mehler_expectation needs unit diagonal blocks");

  double B[8][8];  // B[i][j] = Cov(Ybar_i at x, Ybar_j at 0): d_ij pairing
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) B[i][j] = sigma[j][8 + i];

  int col = 0;
  while (col < 8 && alpha[col] == 0) ++col;
  double acc = 0.0;
  int rem[8];
  for (int i = 0; i < 8; ++i) rem[i] = beta[i];
  if (col == 8) {
    acc = (qb == 0) ? 1.0 : 0.0;
  } else {
    mehler_recurse(B, alpha, rem, col, 0, alpha[col], 1.0, acc);
  }
  double fa = 1.0, fb = 1.0;
  for (int i = 0; i < 8; ++i) {
    fa *= factorial(alpha[i]);
    fb *= factorial(beta[i]);
  }
  return fa * fb * acc;
}

double var_I2_per_vol(const CovarianceProfile& profile, double n) {
  if (!(n > 0.0)) throw ParameterOutOfRange("halfwidth n must be positive");
  const double L = 2.0 * kSqrt3 * n;
  const bool oscillatory =
      profile.spectrum().model() == Model::Monochromatic;
  const double panel = oscillatory ? 0.25 : std::min(0.5, L / 16.0);
  const double integral = integrate_panels(
      [&](double rho) {
        return BoxCovariogram::radialized(n, rho) * profile.dr(rho) * rho *
               rho;
      },
      0.0, L, panel);
  return 4.0 / kPi * integral;
}

double v2_quadrature(const CovarianceProfile& profile) {
  const bool oscillatory =
      profile.spectrum().model() == Model::Monochromatic;
  const double panel = oscillatory ? 0.25 : 0.5;
  auto f = [&](double rho) { return profile.dr(rho) * rho * rho; };
  double total = integrate_panels(f, 0.0, 64.0, panel);
  double lo = 64.0;
  for (int k = 0; k < 12; ++k) {
    const double hi = 2.0 * lo;
    const double inc = integrate_panels(f, lo, hi, panel);
    total += inc;
    lo = hi;
    if (std::abs(inc) < 1e-9 * std::abs(total)) break;
    if (k == 11)
      throw QuadratureFailure("Dr tail did not converge by rho = 262144");
  }
  return 4.0 / kPi * total;
}

double v2_plancherel(const RadialSpectrum& spectrum) {
  switch (spectrum.model()) {
    case Model::Monochromatic:
      throw DivergentIntegral(
          "monochromatic spectrum is an atom: f^2/|k|^2 has no density");
    case Model::PowerLaw:
      throw DivergentIntegral(
          "power_law: f(rho)^2 rho^-2 diverges at rho = 0");
    default:
      break;
  }
  const double lam = spectrum.second_moment_lambda();
  const double integral = integrate_adaptive(
      [&](double rho) {
        const double f = spectrum.density(rho);
        const double w = 1.0 - rho * rho / (3.0 * lam);
        return w * w * f * f / (rho * rho);
      },
      0.0, spectrum.rho_max(), 1e-12, 1e-300);
  return 32.0 * kPi * kPi * integral;
}

double v2_plancherel_printed_form(const RadialSpectrum& spectrum) {
  switch (spectrum.model()) {
    case Model::Monochromatic:
    case Model::PowerLaw:
      throw DivergentIntegral("spectral integral diverges for this model");
    default:
      break;
  }
  const double lam = spectrum.second_moment_lambda();
  const double integral = integrate_adaptive(
      [&](double rho) {
        const double f = spectrum.density(rho);
        const double w = 1.0 + rho * rho / (3.0 * lam);
        return w * w * f * f / (rho * rho);
      },
      0.0, spectrum.rho_max(), 1e-12, 1e-300);
  return 4.0 / kPi * integral;
}

namespace {

// F(y) = y^-2 (cos 2y - sin(2y)/y + sin^2(y)/y^2); series near 0 to dodge
// the cancellation (F(0) = -1)
double mono_F(double y) {
  if (y < 0.4) {
    // F = sum_{k>=1} (-1)^k 4^k [1/(2k)! - 2/(2k+1)! + 2/(2k+2)!] y^{2k-2}
    double acc = 0.0, p4 = 1.0, y2 = y * y, yp = 1.0;
    for (int k = 1; k <= 12; ++k) {
      p4 *= -4.0;
      const double coef = p4 * (1.0 / factorial(2 * k) -
                                2.0 / factorial(2 * k + 1) +
                                2.0 / factorial(2 * k + 2));
      if (k > 1) yp *= y2;
      acc += coef * yp;
    }
    return acc;
  }
  const double s = std::sin(y), s2 = std::sin(2.0 * y), c2 = std::cos(2.0 * y);
  return (c2 - s2 / y + s * s / (y * y)) / (y * y);
}

// tails int_Y^inf cos(2y) y^-a dy and sin counterpart by iterated parts
double tail_Ic(double Y, int a, int depth);
double tail_Is(double Y, int a, int depth) {
  if (depth > 12) return 0.0;
  return std::cos(2.0 * Y) / (2.0 * std::pow(Y, a)) -
         0.5 * a * tail_Ic(Y, a + 1, depth + 1);
}
double tail_Ic(double Y, int a, int depth) {
  if (depth > 12) return 0.0;
  return -std::sin(2.0 * Y) / (2.0 * std::pow(Y, a)) +
         0.5 * a * tail_Is(Y, a + 1, depth + 1);
}

double integral_F_oracle() {
  const double Y = 200.0;
  const double head = integrate_panels(mono_F, 0.0, Y, kPi / 8.0);
  // tail of F = cos2y/y^2 - sin2y/y^3 + (1 - cos2y)/(2 y^4)
  const double tail = tail_Ic(Y, 2, 0) - tail_Is(Y, 3, 0) +
                      1.0 / (6.0 * Y * Y * Y) - 0.5 * tail_Ic(Y, 4, 0);
  return head + tail;
}

}  // namespace

DecayTable monochromatic_decay(const std::vector<double>& ns) {
  DecayTable table;
  table.integral_F = integral_F_oracle();
  for (double n : ns) {
    if (!(n > 0.0)) throw ParameterOutOfRange("halfwidth n must be positive");
    const double L = 2.0 * kSqrt3 * n;
    auto C = [n](double y) { return BoxCovariogram::radialized(n, y); };
    DecayRow row;
    row.n = n;
    row.t1 = -2.0 * integrate_panels(
                        [&](double y) { return C(y) * std::cos(2.0 * y); },
                        0.0, L, kPi / 8.0);
    row.t2 = 4.0 * integrate_panels(
                       [&](double y) {
                         const double s = y < 1e-8
                                              ? 2.0 - 4.0 * y * y / 3.0
                                              : std::sin(2.0 * y) / y;
                         return C(y) * s;
                       },
                       0.0, L, kPi / 8.0);
    row.t3 = 6.0 * integrate_panels(
                       [&](double y) { return C(y) * mono_F(y); }, 0.0, L,
                       kPi / 8.0);
    row.total = row.t1 + row.t2 + row.t3;
    table.rows.push_back(row);
  }
  return table;
}

ScalingFit powerlaw_scaling(const RadialSpectrum& spectrum,
                            const std::vector<double>& ns) {
  if (ns.size() < 3)
    throw ParameterOutOfRange("scaling fit needs at least 3 halfwidths");
  CovarianceProfile profile(spectrum);
  ScalingFit fit;
  fit.ns = ns;
  std::vector<double> lx, ly;
  for (double n : ns) {
    const double per = var_I2_per_vol(profile, n);
    fit.var_per_vol.push_back(per);
    const double vol = 8.0 * n * n * n;
    lx.push_back(std::log(vol));
    ly.push_back(std::log(per * vol));
  }
  const std::size_t m = lx.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.exponent = sxy / sxx;
  fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

double second_chaos_grid(const GridSample& grid, double lambda) {
  if (!grid.has_gradients)
    throw ParameterOutOfRange("second_chaos_grid needs gradient samples");
  const int n0 = grid.dims[0], n1 = grid.dims[1], n2 = grid.dims[2];
  auto edge = [](int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; };
  double acc = 0.0;
  for (int l = 0; l < n2; ++l)
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        const std::size_t v = grid.vertex_index(i, j, l);
        const double w = edge(i, n0) * edge(j, n1) * edge(l, n2);
        double val = -(grid.xi[v] * grid.xi[v] - 1.0 +
                       grid.eta[v] * grid.eta[v] - 1.0) /
                     (2.0 * kPi);
        double gsum = 0.0;
        for (int d = 0; d < 3; ++d)
          gsum += grid.grad_xi[d][v] * grid.grad_xi[d][v] +
                  grid.grad_eta[d][v] * grid.grad_eta[d][v];
        val += (gsum / lambda - 6.0) / (6.0 * kPi);
        acc += w * val;
      }
  return acc * grid.h * grid.h * grid.h;
}

}  // namespace nodal3d
