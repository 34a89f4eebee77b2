#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "nodal3d/errors.hpp"
#include "nodal3d/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nodal3d: nodal-line statistics of 3D complex Gaussian waves"};
  app.failure_message(CLI::FailureMessage::help);

  std::string experiment, config_path, out_dir;
  long long seed = -1;
  int threads = 0;

  app.add_option("experiment", experiment,
                 "expectation | anisotropic_expectation | variance_scan | "
                 "clt_check | chaos_coeffs | mono_decay | powerlaw_scaling | "
                 "validate_all")
      ->required();
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--seed", seed, "override master_seed");
  app.add_option("--out", out_dir, "override out_dir");
  app.add_option("--threads", threads,
                 "worker threads (default: config, then NODAL3D_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    nodal3d::ExperimentConfig cfg =
        config_path.empty()
            ? nodal3d::ExperimentConfig{}
            : nodal3d::ExperimentConfig::from_file(config_path);
    cfg.experiment = experiment;
    if (seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads > 0) {
      cfg.threads = threads;
    } else if (config_path.empty() || cfg.threads <= 1) {
      if (const char* env = std::getenv("NODAL3D_THREADS")) {
        try {
          const int t = std::stoi(env);
          if (t < 1) throw nodal3d::ConfigError("NODAL3D_THREADS must be >= 1");
          cfg.threads = t;
        } catch (const nodal3d::ConfigError&) {
          throw;
        } catch (const std::exception&) {
          throw nodal3d::ConfigError(std::string("bad NODAL3D_THREADS: ") +
                                     env);
        }
      }
    }
    cfg.validate();
    return nodal3d::run_experiment(cfg);
  } catch (const nodal3d::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
