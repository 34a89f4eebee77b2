#ifndef NODAL3D_HARNESS_HPP
#define NODAL3D_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nodal3d/spectrum.hpp"

namespace nodal3d {

// Flat key=value experiment configuration ('#' comments). Unknown keys are
// hard errors. Every field is echoed verbatim into each report.
struct ExperimentConfig {
  std::string experiment;  // expectation | variance_scan | clt_check |
                           // chaos_coeffs | mono_decay | powerlaw_scaling |
                           // anisotropic_expectation | validate_all
  std::string model = "bargmann_fock";
  double kappa = 1.0;
  int p = 1;
  double beta = 1.0;
  int atoms = 1024;
  double n = 3.0;
  std::vector<double> n_list;
  double h = 0.1;
  int realizations = 200;
  std::uint64_t master_seed = 20260801;
  long mc_samples = 1000000;
  int threads = 1;
  std::array<double, 3> transform_diag{1.0, 1.0, 2.0};
  std::string out_dir = ".";

  RadialSpectrum make_spectrum() const;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);
  void validate() const;
  // key=value echo used in reports
  std::vector<std::pair<std::string, std::string>> echo() const;
};

struct EnsembleStats {
  double mean = 0.0;
  double variance = 0.0;  // sample variance; meaningful only if defined
  bool variance_defined = false;
  double std_error_of_mean = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  long count = 0;
  std::vector<double> values;  // per-realization lengths, fixed order
};

EnsembleStats compute_stats(const std::vector<double>& values,
                            bool keep_values = true);

// nodal lengths over `realizations` independent fields at halfwidth n;
// seeds derived from master_seed by index, worker-count independent
EnsembleStats run_ensemble(const ExperimentConfig& cfg);
EnsembleStats run_ensemble_at(const ExperimentConfig& cfg, double n);

struct CltReport {
  double z_skew = 0.0;
  double z_kurtosis = 0.0;
  bool pass = false;
  double var_per_vol = 0.0;
};
CltReport clt_diagnostics(const EnsembleStats& stats, double volume);

struct VarianceScanRow {
  double n = 0.0;
  double var_per_vol = 0.0;       // empirical
  double ci_lo = 0.0, ci_hi = 0.0;  // bootstrap 95%
  double boot_sd = 0.0;
  double floor_per_vol = 0.0;  // lambda^2 var_I2/vol
  double ratio = 0.0;          // empirical / floor
};
std::vector<VarianceScanRow> variance_scan(const ExperimentConfig& cfg);

// acceptance suite: one entry per criterion, in spec order
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};
struct AcceptanceReport {
  std::vector<CriterionResult> results;
  bool all_pass() const;
};
// quick=true shrinks ensemble sizes (smoke testing); the shipped acceptance
// gate runs quick=false
AcceptanceReport run_acceptance(std::uint64_t master_seed, int threads,
                                bool quick = false);

// named experiment dispatch: writes <experiment>.json (plus CSV tables where
// applicable) into cfg.out_dir; returns process exit code (0 pass,
// 1 acceptance failure)
int run_experiment(const ExperimentConfig& cfg);

}  // namespace nodal3d

#endif
