#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wavefront/config.hpp"
#include "wavefront/lattice.hpp"
#include "wavefront/ovf.hpp"
#include "wavefront/solver.hpp"
#include "wavefront/stability.hpp"
#include "wavefront/waves.hpp"

namespace wavefront {

/// Fixed 17-significant-digit formatting used by every CSV writer.
std::string format_double(double x);

/// OVF, critical pair and the selected wavefront for a configuration.
struct WaveSetup {
  OvfSpec spec;
  CriticalPair cp;
  WavefrontPoint point;
};

WaveSetup select_wave(const ExperimentConfig& cfg);

/// Initial segment for the configuration, with the perturbation applied.
Segment initial_segment(const ExperimentConfig& cfg, const WavefrontPoint& point);

/// Configurations of the three reference examples (1, 2 or 3).
ExperimentConfig example_config(int n);

/// Extrema of z' located as sign changes of z'' (taken from the right-hand
/// side) on [t_from, t_end], refined by bisection.
struct OscillationStats {
  std::vector<double> extremum_times;
  std::vector<double> extremum_values;
  /// |max - min| for each consecutive pair of extrema.
  std::vector<double> peak_to_peak;
  /// Full cycles (two extrema each).
  std::size_t cycles = 0;
  /// (max - min) / mean of peak_to_peak over the last 10 cycles; NaN when
  /// fewer than 10 cycles were seen.
  double last_cycles_variation = 0.0;
};

OscillationStats measure_oscillation(const Trajectory& traj, double t_from, double dt);

/// sup and terminal value of |z'(t) + c| on [0, t_end].
struct SpeedDeviation {
  double sup = 0.0;
  double terminal = 0.0;
};

SpeedDeviation speed_deviation(const Trajectory& traj, double c, double dt);

/// Columns t,z,dz on the grid t_from, t_from + dt, ..., t_end.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double dt,
                          double t_from = 0.0);

nlohmann::json point_json(const WaveSetup& setup);
nlohmann::json verdict_json(const StabilityVerdict& v);
nlohmann::json solver_json(const Trajectory& traj);

/// Result of one experiment: the JSON summary that is also written to disk.
struct Bundle {
  nlohmann::json summary;
  std::vector<std::filesystem::path> files;
};

/// Integrates the configured wave and writes <name>.csv / <name>.json.
Bundle run_simulation(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                      const std::string& name);

/// Like run_simulation, plus deviation and oscillation statistics.
Bundle run_perturbed(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                     const std::string& name = "perturbed");

/// Reference example n with verdict, roots and time series.
Bundle run_example(int n, const std::filesystem::path& out_dir,
                   const std::optional<Tolerance>& tol = std::nullopt,
                   const std::optional<double>& dt = std::nullopt);

struct SweepRow {
  double h = 0.0;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<StabilityParams> params;
  std::optional<Region> region;
  std::optional<Classification> verdict;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int region_flips = 0;
  std::optional<HopfCrossing> crossing;
};

/// Samples h uniformly on [lo, hi], evaluates both branches and classifies the
/// first one; locates the C1 crossing when the region flips. Rows are
/// computed in parallel; output order is the h order. Throws DomainError for
/// an empty range or one entirely at or below h*.
SweepResult sweep(const OvfSpec& spec, double lo, double hi, int samples);

void write_sweep_csv(std::ostream& os, const SweepResult& result);

/// h,c1,c2,hVp_c1,hVp_c2 on a uniform h grid, preceded by a comment line with
/// c_star, h_star and h_hat.
void write_branches_csv(std::ostream& os, const OvfSpec& spec, double lo, double hi,
                        int samples);

/// curve,alpha,beta samples of G0, G1 and C1.
void write_region_boundary_csv(std::ostream& os, int samples);

/// alpha,beta,region on a grid over [-3, 0] x [0, 6].
void write_region_grid_csv(std::ostream& os, int alpha_samples, int beta_samples);

/// Long format t,j,x,v (or t,j,headway).
void write_lattice_csv(std::ostream& os, const LatticeRun& run, bool headways);

/// Ansatz lattice from the configured profile (integrated far enough to cover
/// car j_min at t_min) and, when
/// cfg.lattice.followers > 0, a direct simulation of that many cars behind
/// car j_max started on the ansatz.
struct LatticeResult {
  LatticeRun ansatz;
  std::optional<LatticeRun> direct;
  double residual = 0.0;
  /// max |x_direct - x_ansatz| over the followers.
  double max_deviation = 0.0;
};

LatticeResult run_lattice(const ExperimentConfig& cfg);

}  // namespace wavefront
