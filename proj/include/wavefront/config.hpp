#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "wavefront/rk23.hpp"

namespace wavefront {

enum class InitialKind { QuasiStationary, Constant, Affine, Sampled };

/// Everything an experiment needs. Defaults mirror the reference setup
/// (tolerances 1e-9 relative, 1e-12 absolute).
struct ExperimentConfig {
  struct Ovf {
    std::string kind = "vq";
    double v_max = 100.0;
    double d_s = 0.0;
  } ovf;

  double h = 0.2;
  /// 1 or 2; ignored when `c` is set.
  int branch = 1;
  std::optional<double> c;

  struct Initial {
    InitialKind kind = InitialKind::QuasiStationary;
    /// Position z(0) of the initial segment.
    double offset = 0.0;
    /// Slope for kind = affine.
    double slope = 0.0;
    /// CSV with columns s,z,dz for kind = sampled.
    std::string file;
  } initial;

  struct Perturbation {
    /// Added to the wave speed: the segment slope becomes -(c + slope_offset).
    double slope_offset = 0.0;
    /// Added to the velocity component of the segment.
    double amplitude = 0.0;
  } perturbation;

  double t_end = 20.0;
  Tolerance tol{1e-9, 1e-12};
  double output_dt = 0.01;
  /// Time window for the oscillation statistics (start of the window).
  double stats_from = 0.0;

  struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int samples = 100;
  };
  Range sweep{0.0, 0.0, 100};
  Range branches{0.0, 0.0, 200};

  struct Lattice {
    int j_min = -60;
    int j_max = -50;
    double t_min = 0.0;
    double t_max = 10.0;
    int samples = 200;
    int followers = 0;
  } lattice;

  struct Region {
    int alpha_samples = 61;
    int beta_samples = 61;
    int boundary_samples = 200;
  } region;
};

/// Parses INI-style text ([section] key = value). Unknown keys are rejected.
/// Throws ParameterError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks the invariants (positive tolerances, t_end > 0, finite numbers).
void validate(const ExperimentConfig& cfg);

std::string to_string(InitialKind k);

}  // namespace wavefront
