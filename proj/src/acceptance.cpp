#include <cmath>
#include <cstdio>
#include <functional>

#include <Eigen/Dense>

#include "nodal3d/chaos.hpp"
#include "nodal3d/errors.hpp"
#include "nodal3d/harness.hpp"
#include "nodal3d/kacrice.hpp"
#include "nodal3d/nodal.hpp"
#include "nodal3d/synthesis.hpp"

namespace nodal3d {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

std::string fm(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// grid filled from analytic component fields (nodal extractor oracles)
GridSample analytic_grid(double n, double h,
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
        const double x = g.coord(i), y = g.coord(j), z = g.coord(l);
        const std::size_t idx = g.vertex_index(i, j, l);
        g.xi[idx] = u(x, y, z);
        g.eta[idx] = v(x, y, z);
      }
  return g;
}

ExperimentConfig base_config(std::uint64_t seed, int threads) {
  ExperimentConfig cfg;
  cfg.experiment = "expectation";
  cfg.model = "bargmann_fock";
  cfg.atoms = 1024;
  cfg.n = 3.0;
  cfg.h = 0.1;
  cfg.threads = threads;
  cfg.master_seed = seed;
  return cfg;
}

CriterionResult criterion1(std::uint64_t seed, int threads, bool quick) {
  CriterionResult r{1, "isotropic expectation, BargmannFock + Monochromatic",
                    false, ""};
  const int reals = quick ? 30 : 200;
  const double gate = quick ? 0.08 : 0.05;
  ExperimentConfig cfg = base_config(derive_seed(seed, 101), threads);
  cfg.realizations = reals;
  const double vol = 8.0 * cfg.n * cfg.n * cfg.n;

  const EnsembleStats bf = run_ensemble(cfg);
  const double bf_rel = bf.mean / vol / (1.0 / kPi) - 1.0;

  cfg.model = "monochromatic";
  cfg.kappa = 1.0;
  cfg.master_seed = derive_seed(seed, 102);
  const EnsembleStats mono = run_ensemble(cfg);
  const double mono_rel = mono.mean / vol / (1.0 / (3.0 * kPi)) - 1.0;

  r.pass = std::abs(bf_rel) < gate && std::abs(mono_rel) < gate;
  r.detail = "BF mean/vol=" + fm(bf.mean / vol) + " vs 1/pi=" +
             fm(1.0 / kPi) + " (rel " + fm(bf_rel) + "); Mono mean/vol=" +
             fm(mono.mean / vol) + " vs 1/3pi=" + fm(1.0 / (3.0 * kPi)) +
             " (rel " + fm(mono_rel) + "); N=" + std::to_string(reals);
  return r;
}

CriterionResult criterion2(std::uint64_t seed) {
  CriterionResult r{2, "vorticity moment E|N ^ N'| = 2", false, ""};
  const WedgeMoments m = cross_product_moment(1000000, derive_seed(seed, 2));
  r.pass = std::abs(m.mean_norm - 2.0) < 0.01;
  r.detail = "MC mean=" + fm(m.mean_norm) + " +/- " + fm(m.se_norm) +
             " target 2 +/- 0.01; E|.|^2=" + fm(m.mean_sq);
  return r;
}

CriterionResult criterion3(std::uint64_t seed, int threads, bool quick) {
  CriterionResult r{3, "anisotropic expectation vs deterministic oracle",
                    false, ""};
  ExperimentConfig cfg = base_config(derive_seed(seed, 301), threads);
  cfg.experiment = "anisotropic_expectation";
  cfg.transform_diag = {1.0, 1.0, 2.0};
  cfg.realizations = quick ? 30 : 200;

  const AnisotropicSpectrum aspec(
      cfg.make_spectrum(), diag_matrix(1.0, 1.0, 2.0));
  const SpectralMoments m = second_moment(aspec);
  const double vol = 8.0 * cfg.n * cfg.n * cfg.n;
  const double oracle = expected_length_anisotropic(m, vol);
  const EnsembleStats st = run_ensemble(cfg);
  const double z = (st.mean - oracle) / st.std_error_of_mean;
  r.pass = std::abs(z) < 3.0;
  r.detail = "ensemble mean=" + fm(st.mean) + " oracle=" + fm(oracle) +
             " z=" + fm(z) + " (gate |z|<3); eigs=(" + fm(m.eigenvalues[0]) +
             "," + fm(m.eigenvalues[1]) + "," + fm(m.eigenvalues[2]) + ")";
  return r;
}

CriterionResult criterion4() {
  CriterionResult r{4, "Plancherel identity, quadrature vs spectral", false,
                    ""};
  ModelParams gp;
  gp.p = 2;
  gp.beta = 1.0;
  const RadialSpectrum bf = RadialSpectrum::make(Model::BargmannFock);
  const RadialSpectrum gt = RadialSpectrum::make(Model::GammaType, gp);
  const double q_bf = v2_quadrature(CovarianceProfile(bf));
  const double p_bf = v2_plancherel(bf);
  const double q_gt = v2_quadrature(CovarianceProfile(gt));
  const double p_gt = v2_plancherel(gt);
  const double rel_bf = std::abs(q_bf / p_bf - 1.0);
  const double rel_gt = std::abs(q_gt / p_gt - 1.0);
  r.pass = rel_bf < 1e-6 && rel_gt < 1e-6;
  r.detail = "BF quad=" + fm(q_bf) + " spectral=" + fm(p_bf) + " rel=" +
             fm(rel_bf) + "; GammaType(2,1) quad=" + fm(q_gt) +
             " spectral=" + fm(p_gt) + " rel=" + fm(rel_gt);
  return r;
}

CriterionResult criterion5(std::uint64_t seed, bool quick) {
  CriterionResult r{5, "second-chaos coefficients c_{2e_k} and vanishing a",
                    false, ""};
  const long samples = quick ? 400000 : 2000000;
  std::vector<Index6> idx;
  idx.push_back({0, 0, 0, 0, 0, 0});
  for (int k = 0; k < 6; ++k) {
    Index6 a{};
    a[k] = 2;
    idx.push_back(a);
  }
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      Index6 a{};
      a[i] = 1;
      a[j] = 1;
      idx.push_back(a);
    }
  const auto est = coefficient_a_batch(idx, samples, derive_seed(seed, 5));
  const double b0 = coefficient_b(0), b2 = coefficient_b(2);

  // c_{2e_1} = c_{2e_2} = b_2 b_0 a_0 -> -1/(2 pi)
  const double c_field = b2 * b0 * est[0].value;
  double worst_c = std::abs(c_field / (-1.0 / (2.0 * kPi)) - 1.0);
  // c_{2e_k} = b_0^2 a_{2 e_{k-2}} -> 1/(6 pi), k = 3..8
  for (int k = 1; k <= 6; ++k) {
    const double c = b0 * b0 * est[k].value;
    worst_c = std::max(worst_c, std::abs(c / (1.0 / (6.0 * kPi)) - 1.0));
  }
  // all mixed a_{e_i + e_j}: 15 distinct pairs cover the 24 ordered ones
  double worst_z = 0.0;
  for (std::size_t k = 7; k < idx.size(); ++k)
    worst_z = std::max(worst_z, std::abs(est[k].value) / est[k].se);

  r.pass = worst_c < 0.02 && worst_z < 4.0;
  r.detail = "worst c rel err=" + fm(worst_c) + " (gate 2%); worst |a|/se=" +
             fm(worst_z) + " (gate 4) over 15 distinct mixed pairs; N=" +
             std::to_string(samples);
  return r;
}

CriterionResult criterion6() {
  CriterionResult r{6, "monochromatic second-chaos decay", false, ""};
  const DecayTable t = monochromatic_decay({5, 10, 20, 40, 50});
  ModelParams mp;
  mp.kappa = 1.0;
  CovarianceProfile prof(RadialSpectrum::make(Model::Monochromatic, mp));
  const double v5 = var_I2_per_vol(prof, 5.0);
  const double v40 = var_I2_per_vol(prof, 40.0);
  double t2_50 = 0.0;
  for (const auto& row : t.rows)
    if (row.n == 50.0) t2_50 = row.t2;
  const double f_err = std::abs(t.integral_F + kPi / 3.0);
  const bool ok_ratio = v40 <= 0.2 * v5;
  const bool ok_f = f_err < 1e-8;
  const bool ok_t2 = std::abs(t2_50 / (2.0 * kPi) - 1.0) < 0.02;
  r.pass = ok_ratio && ok_f && ok_t2;
  r.detail = "varI2/vol n5=" + fm(v5) + " n40=" + fm(v40) + " ratio=" +
             fm(v40 / v5) + " (gate 0.2); int F err=" + fm(f_err) +
             " (gate 1e-8); T2(50)=" + fm(t2_50) + " vs 2pi=" +
             fm(2.0 * kPi);
  return r;
}

CriterionResult criterion7() {
  CriterionResult r{7, "power-law variance scaling exponents", false, ""};
  const std::vector<double> ns = {5, 10, 20, 40, 80};
  bool pass = true;
  std::string d;
  for (double beta : {0.1, 0.2}) {
    ModelParams mp;
    mp.beta = beta;
    const ScalingFit fit =
        powerlaw_scaling(RadialSpectrum::make(Model::PowerLaw, mp), ns);
    const double target = (2.0 * beta + 4.0) / 3.0;
    pass = pass && std::abs(fit.exponent - target) < 0.05;
    d += "beta=" + fm(beta) + ": slope=" + fm(fit.exponent) + " target=" +
         fm(target) + "; ";
  }
  const ScalingFit ctrl =
      powerlaw_scaling(RadialSpectrum::make(Model::BargmannFock), ns);
  pass = pass && std::abs(ctrl.exponent - 1.0) < 0.05;
  d += "BF control slope=" + fm(ctrl.exponent) + " target=1 (gates 0.05)";
  r.pass = pass;
  r.detail = d;
  return r;
}

CriterionResult criterion8(std::uint64_t seed, int threads, bool quick) {
  CriterionResult r{8, "CLT diagnostics and second-chaos variance floor",
                    false, ""};
  ExperimentConfig cfg = base_config(derive_seed(seed, 801), threads);
  cfg.realizations = quick ? 120 : 500;
  const EnsembleStats st = run_ensemble(cfg);
  const double vol = 8.0 * cfg.n * cfg.n * cfg.n;
  const CltReport field = clt_diagnostics(st, vol);

  Rng rng(derive_seed(seed, 802));
  std::vector<double> gauss(1000), chi2(1000);
  for (auto& v : gauss) v = rng.normal();
  for (auto& v : chi2) {
    const double z = rng.normal();
    v = z * z;
  }
  const CltReport fg = clt_diagnostics(compute_stats(gauss, false), 1.0);
  const CltReport fc = clt_diagnostics(compute_stats(chi2, false), 1.0);

  ExperimentConfig scan = base_config(derive_seed(seed, 803), threads);
  scan.experiment = "variance_scan";
  scan.n_list = {2.0, 3.0, 4.0};
  scan.realizations = quick ? 30 : 100;
  const auto rows = variance_scan(scan);
  bool floor_ok = true;
  std::string fd;
  for (const auto& row : rows) {
    const bool ok = row.var_per_vol >= row.floor_per_vol - 3.0 * row.boot_sd;
    floor_ok = floor_ok && ok;
    fd += "n=" + fm(row.n) + ": var/vol=" + fm(row.var_per_vol) + " floor=" +
          fm(row.floor_per_vol) + (ok ? " ok; " : " VIOLATED; ");
  }

  r.pass = field.pass && fg.pass && !fc.pass && floor_ok;
  r.detail = "z_skew=" + fm(field.z_skew) + " z_kurt=" + fm(field.z_kurtosis) +
             " (gates |z|<3); fixtures gaussian " +
             std::string(fg.pass ? "pass" : "FAIL") + ", chi2(1) " +
             std::string(!fc.pass ? "fails as required" : "UNEXPECTED PASS") +
             "; floor: " + fd;
  return r;
}

CriterionResult criterion9() {
  CriterionResult r{9, "nodal extractor geometric oracles", false, ""};
  // axis-parallel line through the box, offset off the lattice so the curve
  // sits in general position: exact length 2 on [-1,1]^3
  const GridSample axis = analytic_grid(
      1.0, 0.1, [](double x, double, double) { return x - 0.013; },
      [](double, double y, double) { return y - 0.029; });
  const double axis_len = nodal_length(axis).length;
  const bool ok_axis = std::abs(axis_len - 2.0) < 1e-10;

  auto circle_u = [](double x, double y, double) {
    return x * x + y * y - 1.0;
  };
  auto circle_v = [](double, double, double z) { return z + 0.0137; };
  const double circle_len =
      nodal_length(analytic_grid(1.5, 0.02, circle_u, circle_v)).length;
  const bool ok_circle = std::abs(circle_len / (2.0 * kPi) - 1.0) < 0.01;

  // helix (cos z, sin z, z), speed sqrt(2): length 3 sqrt(2) over |z|<=1.5
  const GridSample helix = analytic_grid(
      1.5, 0.02, [](double x, double, double z) { return x - std::cos(z); },
      [](double, double y, double z) { return y - std::sin(z); });
  const double helix_len = nodal_length(helix).length;
  const double helix_ref = 3.0 * std::sqrt(2.0);
  const bool ok_helix = std::abs(helix_len / helix_ref - 1.0) < 0.01;

  bool monotone = true;
  double prev = 1e300;
  std::string conv;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    const double len =
        nodal_length(analytic_grid(1.5, h, circle_u, circle_v)).length;
    const double err = std::abs(len - 2.0 * kPi);
    monotone = monotone && err < prev;
    prev = err;
    conv += "h=" + fm(h) + ":" + fm(err) + " ";
  }

  r.pass = ok_axis && ok_circle && ok_helix && monotone;
  r.detail = "axis=" + fm(axis_len) + " (exact 2); circle=" + fm(circle_len) +
             " vs 2pi; helix=" + fm(helix_len) + " vs " + fm(helix_ref) +
             "; refinement errs " + conv +
             (monotone ? "(monotone)" : "(NOT monotone)");
  return r;
}

CriterionResult criterion10(std::uint64_t seed, bool quick) {
  CriterionResult r{10, "Mehler engine: closed form + randomized MC", false,
                    ""};
  CovarianceProfile prof(RadialSpectrum::make(Model::BargmannFock));

  // single-slot pairs reduce to E[H_p H_q] = delta_pq p! rho^p
  double worst_closed = 0.0;
  for (const Vec3& x : {Vec3{0.7, 0.0, 0.0}, Vec3{0.4, 0.5, -0.3}}) {
    const Cov16 sig = ybar_covariance(prof, x);
    for (int slot = 0; slot < 8; ++slot) {
      const double rho = sig[slot][8 + slot];
      for (int p = 1; p <= 4; ++p)
        for (int q = 1; q <= 4; ++q) {
          Index8 a{}, b{};
          a[slot] = p;
          b[slot] = q;
          const double got = mehler_expectation(a, b, sig);
          double want = 0.0;
          if (p == q) {
            want = std::tgamma(p + 1.0) * std::pow(rho, p);
          }
          worst_closed = std::max(worst_closed, std::abs(got - want));
        }
    }
  }
  const bool ok_closed = worst_closed < 1e-12;

  // randomized |alpha| = 4 cases against direct MC under the true covariance
  const long mc = quick ? 100000 : 300000;
  Rng rng(derive_seed(seed, 10));
  double worst_z = 0.0;
  int cases = 0;
  while (cases < 20) {
    Vec3 x{rng.uniform(0.2, 1.2), rng.uniform(-0.8, 0.8),
           rng.uniform(-0.8, 0.8)};
    Index8 a{}, b{};
    for (int t = 0; t < 4; ++t) ++a[rng.next_u64() % 8];
    for (int t = 0; t < 4; ++t) ++b[rng.next_u64() % 8];
    const Cov16 sig = ybar_covariance(prof, x);
    const double exact = mehler_expectation(a, b, sig);

    Eigen::MatrixXd S(16, 16);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) S(i, j) = sig[i][j];
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
      llt.compute(S + 1e-12 * Eigen::MatrixXd::Identity(16, 16));
      if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("Ybar covariance Cholesky failed");
    }
    const Eigen::MatrixXd L = llt.matrixL();

    double sum = 0.0, sumsq = 0.0;
    Eigen::VectorXd z(16);
    for (long s = 0; s < mc; ++s) {
      for (int i = 0; i < 16; ++i) z(i) = rng.normal();
      const Eigen::VectorXd y = L * z;
      std::array<double, 8> y0{}, y1{};
      for (int i = 0; i < 8; ++i) {
        y0[i] = y(i);
        y1[i] = y(8 + i);
      }
      const double v = hermite_multi(a, y0) * hermite_multi(b, y1);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / mc;
    const double var = (sumsq / mc - mean * mean) / (mc - 1);
    const double se = std::sqrt(std::max(var, 1e-300));
    worst_z = std::max(worst_z, std::abs(mean - exact) / se);
    ++cases;
  }
  const bool ok_mc = worst_z < 4.0;

  r.pass = ok_closed && ok_mc;
  r.detail = "closed-form worst abs err=" + fm(worst_closed) +
             " (gate 1e-12); MC worst |z|=" + fm(worst_z) +
             " over 20 randomized degree-4 cases (gate 4)";
  return r;
}

CriterionResult criterion11(std::uint64_t seed, bool quick) {
  CriterionResult r{11, "first-order perturbation audit (reporting)", false,
                    ""};
  const long mc = quick ? 200000 : 1000000;
  const PerturbationAudit audit =
      perturbation_check(1.0, mc, derive_seed(seed, 11), 1e-2);

  SpectralMoments m;
  m.lambda = 1.0;
  m.eigenvalues = {0.98, 1.0, 1.02};
  m.matrix = diag_matrix(0.98, 1.0, 1.02);
  const double aniso = expected_length_anisotropic(m, 1.0);
  const double iso = expected_length_isotropic(1.0, 1.0);
  const double rel = std::abs(aniso / iso - 1.0);
  const bool ok_cancel = rel < 4e-4;

  // the audit PASSES on complete reporting, not on the printed coefficient
  const bool reported = std::isfinite(audit.partial_printed) &&
                        std::isfinite(audit.partial_fd_quadrature) &&
                        std::isfinite(audit.partial_fd_mc) &&
                        std::isfinite(audit.coeff_printed) &&
                        std::isfinite(audit.coeff_oracle);
  r.pass = ok_cancel && reported;
  r.detail = "symmetric perturbation (1.02,1,0.98): oracle=" + fm(aniso) +
             " isotropic=" + fm(iso) + " rel=" + fm(rel) +
             " (gate 4e-4); printed partial=" + fm(audit.partial_printed) +
             " fd_quadrature=" + fm(audit.partial_fd_quadrature) +
             " fd_mc=" + fm(audit.partial_fd_mc) + "; printed coeff=" +
             fm(audit.coeff_printed) + " oracle coeff=" +
             fm(audit.coeff_oracle) +
             " (discrepancy documented, reporting-gated)";
  return r;
}

}  // namespace

AcceptanceReport run_acceptance(std::uint64_t master_seed, int threads,
                                bool quick) {
  AcceptanceReport rep;
  auto emit = [&rep](CriterionResult r) {
    std::printf("criterion %2d [%s] %s\n    %s\n", r.id,
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    rep.results.push_back(std::move(r));
  };
  emit(criterion1(master_seed, threads, quick));
  emit(criterion2(master_seed));
  emit(criterion3(master_seed, threads, quick));
  emit(criterion4());
  emit(criterion5(master_seed, quick));
  emit(criterion6());
  emit(criterion7());
  emit(criterion8(master_seed, threads, quick));
  emit(criterion9());
  emit(criterion10(master_seed, quick));
  emit(criterion11(master_seed, quick));
  return rep;
}

}  // namespace nodal3d
