#include "nodal3d/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nodal3d/errors.hpp"
#include "nodal3d/quadrature.hpp"

namespace nodal3d {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kFourPi = 4.0 * kPi;
constexpr std::size_t kCdfTableSize = 4096;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace

std::string model_name(Model m) {
  switch (m) {
    case Model::Monochromatic: return "monochromatic";
    case Model::BargmannFock: return "bargmann_fock";
    case Model::GammaType: return "gamma_type";
    case Model::BlackBody: return "black_body";
    case Model::PowerLaw: return "power_law";
  }
  throw ParameterOutOfRange("unknown model enum");
}

Model model_from_name(const std::string& name) {
  if (name == "monochromatic") return Model::Monochromatic;
  if (name == "bargmann_fock") return Model::BargmannFock;
  if (name == "gamma_type") return Model::GammaType;
  if (name == "black_body") return Model::BlackBody;
  if (name == "power_law") return Model::PowerLaw;
  throw ParameterOutOfRange("unknown model name: " + name);
}

double RadialSpectrum::density(double rho) const {
  const double beta = params_.beta;
  switch (model_) {
    case Model::Monochromatic:
      throw ParameterOutOfRange("monochromatic spectrum has no radial density");
    case Model::BargmannFock:
      return std::pow(2.0 * kPi, -1.5) * rho * rho * std::exp(-0.5 * rho * rho);
    case Model::GammaType:
      return std::pow(beta, params_.p + 1) / (kFourPi * factorial(params_.p)) *
             std::pow(rho, params_.p) * std::exp(-beta * rho);
    case Model::BlackBody: {
      // c = 15/(4 pi^5) makes the total mass 1
      const double c = 15.0 / (kFourPi * std::pow(kPi, 4));
      if (rho < 1e-8) return c * rho * rho;  // rho^3/(e^rho-1) -> rho^2
      return c * rho * rho * rho / std::expm1(rho);
    }
    case Model::PowerLaw:
      if (rho <= 0.0 || rho >= 1.0) return 0.0;
      return (1.0 - beta) / kFourPi * std::pow(rho, -beta);
  }
  throw ParameterOutOfRange("unknown model enum");
}

RadialSpectrum RadialSpectrum::make(Model model, ModelParams params) {
  switch (model) {
    case Model::Monochromatic:
      if (!(params.kappa > 0.0))
        throw ParameterOutOfRange("monochromatic kappa must be in (0,inf), got " +
                                  std::to_string(params.kappa));
      break;
    case Model::GammaType:
      if (params.p < 1)
        throw ParameterOutOfRange("gamma_type p must be an integer >= 1, got " +
                                  std::to_string(params.p));
      if (!(params.beta > 0.0))
        throw ParameterOutOfRange("gamma_type beta must be in (0,inf), got " +
                                  std::to_string(params.beta));
      break;
    case Model::PowerLaw:
      if (!(params.beta > 0.0 && params.beta < 1.0))
        throw ParameterOutOfRange("power_law beta must be in (0,1), got " +
                                  std::to_string(params.beta));
      break;
    default:
      break;
  }

  RadialSpectrum s;
  s.model_ = model;
  s.params_ = params;

  // truncation radius: march outward until (1+rho^2) f(rho) falls below
  // 1e-17 of its peak
  switch (model) {
    case Model::Monochromatic:
      s.rho_max_ = params.kappa;
      break;
    case Model::PowerLaw:
      s.rho_max_ = 1.0;
      break;
    default: {
      double peak = 0.0, rho_peak = 0.0;
      for (double rho = 1e-3; rho < 400.0; rho *= 1.05) {
        const double v = (1.0 + rho * rho) * s.density(rho);
        if (v > peak) {
          peak = v;
          rho_peak = rho;
        }
      }
      double rho = rho_peak;
      while ((1.0 + rho * rho) * s.density(rho) > 1e-17 * peak) rho *= 1.02;
      s.rho_max_ = rho;
      break;
    }
  }

  if (model == Model::Monochromatic) {
    s.lambda_ = params.kappa * params.kappa / 3.0;
  } else {
    const double m2 = integrate_adaptive(
        [&s](double rho) { return rho * rho * s.density(rho); }, 0.0,
        s.rho_max_, 1e-12);
    if (!std::isfinite(m2)) throw DivergentMoment("second spectral moment diverges");
    s.lambda_ = kFourPi / 3.0 * m2;
  }

  if (model == Model::BargmannFock || model == Model::GammaType ||
      model == Model::BlackBody) {
    s.build_cdf_table();
  }
  return s;
}

RadialSpectrum RadialSpectrum::make(const std::string& name, ModelParams params) {
  return make(model_from_name(name), params);
}

double RadialSpectrum::normalization_mass() const {
  if (model_ == Model::Monochromatic) return 1.0;  // 4*pi * 1/(4*pi)
  return kFourPi *
         integrate_adaptive([this](double rho) { return density(rho); }, 0.0,
                            rho_max_, 1e-12);
}

double RadialSpectrum::second_moment_lambda() const { return lambda_; }

bool RadialSpectrum::power_law_scaling_regime() const {
  return model_ == Model::PowerLaw && params_.beta < 0.25;
}

// Tabulated CDF of the modulus density 4*pi*f on a uniform grid, inverted by
// monotone cubic (Fritsch-Carlson) interpolation of rho as a function of F.
void RadialSpectrum::build_cdf_table() {
  const std::size_t n = kCdfTableSize;
  tab_rho_.resize(n);
  tab_cdf_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    tab_rho_[i] = rho_max_ * static_cast<double>(i) / (n - 1);
  tab_cdf_[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double err;
    tab_cdf_[i] = tab_cdf_[i - 1] +
                  gk15_panel([this](double r) { return kFourPi * density(r); },
                             tab_rho_[i - 1], tab_rho_[i], err);
  }
  const double total = tab_cdf_.back();
  for (auto& v : tab_cdf_) v /= total;

  // Fritsch-Carlson slopes for the inverse map F -> rho
  tab_slope_.assign(n, 0.0);
  std::vector<double> sec(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dF = tab_cdf_[i + 1] - tab_cdf_[i];
    sec[i] = dF > 0.0 ? (tab_rho_[i + 1] - tab_rho_[i]) / dF : 0.0;
  }
  tab_slope_[0] = sec[0];
  tab_slope_[n - 1] = sec[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (sec[i - 1] * sec[i] <= 0.0)
      tab_slope_[i] = 0.0;
    else
      tab_slope_[i] = 2.0 * sec[i - 1] * sec[i] / (sec[i - 1] + sec[i]);
  }
}

double RadialSpectrum::radial_cdf(double rho) const {
  if (model_ == Model::Monochromatic) return rho >= params_.kappa ? 1.0 : 0.0;
  if (model_ == Model::PowerLaw) {
    if (rho <= 0.0) return 0.0;
    if (rho >= 1.0) return 1.0;
    return std::pow(rho, 1.0 - params_.beta);
  }
  if (rho <= 0.0) return 0.0;
  if (rho >= rho_max_) return 1.0;
  const auto it = std::upper_bound(tab_rho_.begin(), tab_rho_.end(), rho);
  const std::size_t i = static_cast<std::size_t>(it - tab_rho_.begin()) - 1;
  // linear in rho between table nodes is ample here (forward direction is
  // only used for reporting; sampling uses the monotone inverse)
  const double t = (rho - tab_rho_[i]) / (tab_rho_[i + 1] - tab_rho_[i]);
  return tab_cdf_[i] + t * (tab_cdf_[i + 1] - tab_cdf_[i]);
}

double RadialSpectrum::sample_rho(Rng& rng) const {
  switch (model_) {
    case Model::Monochromatic:
      return params_.kappa;
    case Model::PowerLaw:
      return std::pow(rng.uniform(), 1.0 / (1.0 - params_.beta));
    default: {
      const double u = rng.uniform();
      const auto it = std::upper_bound(tab_cdf_.begin(), tab_cdf_.end(), u);
      std::size_t i = static_cast<std::size_t>(it - tab_cdf_.begin());
      if (i == 0) i = 1;
      if (i >= tab_cdf_.size()) i = tab_cdf_.size() - 1;
      const std::size_t j = i - 1;
      const double h = tab_cdf_[i] - tab_cdf_[j];
      if (h <= 0.0) return tab_rho_[j];
      const double t = (u - tab_cdf_[j]) / h;
      const double t2 = t * t, t3 = t2 * t;
      // cubic Hermite on (F, rho)
      return (2 * t3 - 3 * t2 + 1) * tab_rho_[j] +
             (t3 - 2 * t2 + t) * h * tab_slope_[j] +
             (-2 * t3 + 3 * t2) * tab_rho_[i] + (t3 - t2) * h * tab_slope_[i];
    }
  }
}

Vec3 RadialSpectrum::sample_wavevector(Rng& rng) const {
  const double rho = sample_rho(rng);
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {rho * s * std::cos(phi), rho * s * std::sin(phi), rho * z};
}

AnisotropicSpectrum::AnisotropicSpectrum(RadialSpectrum base, const Mat3& A)
    : base_(std::move(base)), transform_(A) {
  const double det =
      A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
      A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
      A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
  if (std::abs(det) < 1e-14)
    throw ParameterOutOfRange("anisotropy transform must be invertible");
}

Vec3 AnisotropicSpectrum::sample_wavevector(Rng& rng) const {
  const Vec3 k = base_.sample_wavevector(rng);
  Vec3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] += transform_[i][j] * k[j];
  return out;
}

SpectralMoments second_moment(const RadialSpectrum& s) {
  SpectralMoments m;
  m.lambda = s.second_moment_lambda();
  for (int i = 0; i < 3; ++i) m.matrix[i][i] = m.lambda;
  m.eigenvalues = {m.lambda, m.lambda, m.lambda};
  return m;
}

SpectralMoments second_moment(const AnisotropicSpectrum& s) {
  const double lam = s.base().second_moment_lambda();
  Eigen::Matrix3d A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = s.transform()[i][j];
  const Eigen::Matrix3d M = lam * A * A.transpose();
  SpectralMoments m;
  m.lambda = lam;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.matrix[i][j] = M(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M);
  for (int i = 0; i < 3; ++i) m.eigenvalues[i] = es.eigenvalues()(i);
  return m;
}

Mat3 diag_matrix(double a, double b, double c) {
  Mat3 m{};
  m[0][0] = a;
  m[1][1] = b;
  m[2][2] = c;
  return m;
}

}  // namespace nodal3d
