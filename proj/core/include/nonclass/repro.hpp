#ifndef NONCLASS_REPRO_HPP
#define NONCLASS_REPRO_HPP

#include <string>
#include <vector>

#include "nonclass/state_library.hpp"

namespace nonclass {

/// Default parameter grids for the reproduction battery.
struct GridConfig {
  std::vector<int> fock_n{1, 2, 3};
  std::vector<double> squeezed_r{0.2, 0.5, 1.0};
  std::vector<double> cat_beta{0.5, 1.0, 1.5};
  std::vector<double> thermal_nbar{0.2, 0.5, 1.0};
  std::vector<double> sqth_nbar{0.2, 0.5, 1.0};
  std::vector<double> sqth_r{0.1, 0.35, 0.7};
  std::vector<cd> displacements{cd(0.5, 0.0), cd(1.0, 0.5)};
  int table3_grid = 50;
  int fig5_points = 101;
  int fig6_points = 72;
  int tau_steps = 512;   // grid pitch 1/tau_steps over [1/2, 1]
  double fig6_b = 0.1;
};

struct ReproJob {
  std::string target;
  std::string out_dir = ".";
  double tol = 1e-8;        // relative tolerance for value reproduction
  double tail_tol = 1e-12;  // truncation tail budget
  GridConfig grids;
};

struct ReproReport {
  std::string target;
  int rows = 0;
  int failures = 0;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::string csv_path;
  std::string summary_path;
};

const std::vector<std::string>& repro_targets();

/// Runs one reproduction/verification job, writing <target>.csv and
/// <target>.summary.json under job.out_dir.  Deterministic: re-running with
/// the same configuration byte-reproduces the CSV.
ReproReport run(const ReproJob& job);

/// The standard single-mode state battery used by the verification targets.
std::vector<StateSpec> standard_battery(const GridConfig& grids,
                                        bool include_displaced);

}  // namespace nonclass

#endif  // NONCLASS_REPRO_HPP
