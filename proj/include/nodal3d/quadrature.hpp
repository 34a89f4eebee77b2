#ifndef NODAL3D_QUADRATURE_HPP
#define NODAL3D_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>

#include "nodal3d/errors.hpp"

namespace nodal3d {

// 15-point Gauss-Kronrod pair (QUADPACK constants)
namespace gk15 {
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace gk15

// One GK15 panel on [a,b]; returns Kronrod value, sets err to |K15-G7|.
template <typename F>
double gk15_panel(F&& f, double a, double b, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = gk15::wgk[7] * fc;
  double resg = gk15::wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * gk15::xgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    resk += gk15::wgk[i] * fsum;
    if (i % 2 == 1) resg += gk15::wg[i / 2] * fsum;
  }
  err = std::abs((resk - resg) * h);
  return resk * h;
}

// Adaptive bisection to the requested tolerances; throws on non-convergence.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-10,
                          double abs_tol = 0.0, int max_depth = 48) {
  struct Rec {
    const F& f;
    double rel_tol, abs_tol;
    double scale;  // running magnitude estimate for the relative test

    double run(double lo, double hi, double whole, double err, int depth) {
      if (err <= abs_tol || err <= rel_tol * std::abs(scale)) return whole;
      if (depth <= 0)
        throw QuadratureFailure("adaptive quadrature did not converge on [" +
                                std::to_string(lo) + "," + std::to_string(hi) +
                                "]");
      const double mid = 0.5 * (lo + hi);
      double el, er;
      const double left = gk15_panel(f, lo, mid, el);
      const double right = gk15_panel(f, mid, hi, er);
      scale = std::max(std::abs(scale), std::abs(left) + std::abs(right));
      return run(lo, mid, left, el, depth - 1) +
             run(mid, hi, right, er, depth - 1);
    }
  };
  double err;
  const double whole = gk15_panel(f, a, b, err);
  Rec rec{f, rel_tol, abs_tol, std::abs(whole)};
  return rec.run(a, b, whole, err, max_depth);
}

// Vector-valued variant: integrates N components in one pass (shared panels).
template <std::size_t N, typename F>
std::array<double, N> integrate_adaptive_vec(F&& f, double a, double b,
                                             double rel_tol = 1e-10,
                                             double abs_tol = 0.0,
                                             int max_depth = 48) {
  auto panel = [&f](double lo, double hi, std::array<double, N>& out,
                    double& err) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    std::array<double, N> resk{}, resg{};
    auto fc = f(c);
    for (std::size_t k = 0; k < N; ++k) {
      resk[k] = gk15::wgk[7] * fc[k];
      resg[k] = gk15::wg[3] * fc[k];
    }
    for (int i = 0; i < 7; ++i) {
      const double dx = h * gk15::xgk[i];
      auto fl = f(c - dx);
      auto fr = f(c + dx);
      for (std::size_t k = 0; k < N; ++k) {
        const double fsum = fl[k] + fr[k];
        resk[k] += gk15::wgk[i] * fsum;
        if (i % 2 == 1) resg[k] += gk15::wg[i / 2] * fsum;
      }
    }
    err = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      out[k] = resk[k] * h;
      err = std::max(err, std::abs((resk[k] - resg[k]) * h));
    }
  };

  struct Rec {
    decltype(panel)& p;
    double rel_tol, abs_tol, scale;

    std::array<double, N> run(double lo, double hi,
                              const std::array<double, N>& whole, double err,
                              int depth) {
      if (err <= abs_tol || err <= rel_tol * scale) return whole;
      if (depth <= 0)
        throw QuadratureFailure("adaptive vector quadrature did not converge");
      const double mid = 0.5 * (lo + hi);
      std::array<double, N> left, right;
      double el, er;
      p(lo, mid, left, el);
      p(mid, hi, right, er);
      double mag = 0.0;
      for (std::size_t k = 0; k < N; ++k)
        mag += std::abs(left[k]) + std::abs(right[k]);
      scale = std::max(scale, mag);
      auto rl = run(lo, mid, left, el, depth - 1);
      auto rr = run(mid, hi, right, er, depth - 1);
      for (std::size_t k = 0; k < N; ++k) rl[k] += rr[k];
      return rl;
    }
  };

  std::array<double, N> whole;
  double err;
  panel(a, b, whole, err);
  double mag = 0.0;
  for (auto v : whole) mag += std::abs(v);
  Rec rec{panel, rel_tol, abs_tol, mag};
  return rec.run(a, b, whole, err, max_depth);
}

// Fixed-length GK15 panels over [a,b]. For oscillatory integrands the panel
// length is chosen by the caller from the oscillation scale; the error
// estimate is only monitored, not refined.
template <typename F>
double integrate_panels(F&& f, double a, double b, double panel_len) {
  if (b <= a) return 0.0;
  const auto n =
      static_cast<std::size_t>(std::ceil((b - a) / panel_len));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / n;
    const double hi = a + (b - a) * static_cast<double>(i + 1) / n;
    double err;
    sum += gk15_panel(f, lo, hi, err);
  }
  return sum;
}

}  // namespace nodal3d

#endif
