#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "wavefront/ovf.hpp"
#include "wavefront/rk23.hpp"
#include "wavefront/solver.hpp"

namespace wavefront {

struct CarState {
  double x = 0.0;
  double v = 0.0;
};

enum class LatticeSource { Ansatz, DirectOde };

/// Positions and velocities of cars j_min..j_max (car j+1 drives in front of
/// car j) on a time grid.
struct LatticeRun {
  int j_min = 0;
  int j_max = 0;
  std::vector<double> times;
  /// position[j - j_min][k] at times[k]; likewise velocity.
  std::vector<std::vector<double>> position;
  std::vector<std::vector<double>> velocity;
  LatticeSource source = LatticeSource::Ansatz;
  /// Number of (j, t) samples with x_{j+1}(t) <= x_j(t).
  std::size_t ordering_violations = 0;
  /// Generating profile when source == Ansatz.
  std::shared_ptr<const Trajectory> profile;

  std::size_t cars() const { return static_cast<std::size_t>(j_max - j_min + 1); }
  double x(int j, std::size_t k) const { return position[static_cast<std::size_t>(j - j_min)][k]; }
  double v(int j, std::size_t k) const { return velocity[static_cast<std::size_t>(j - j_min)][k]; }
  double headway(int j, std::size_t k) const { return x(j + 1, k) - x(j, k); }
  bool ordered() const { return ordering_violations == 0; }
};

/// Default output grid: `samples` uniform times on [t0, t1].
std::vector<double> time_grid(double t0, double t1, std::size_t samples = 200);

/// x_j(t) = z(-t/h - j), x_j'(t) = -z'(-t/h - j) / h with h taken from the
/// profile. Throws DomainError naming the first (j, t) whose argument falls
/// outside [-1, t_end] of the profile.
LatticeRun wavefront_to_lattice(std::shared_ptr<const Trajectory> profile, int j_min,
                                int j_max, const std::vector<double>& times);

using LeaderMotion = std::function<CarState(double t)>;

/// Integrates x_j'' = V(x_{j+1} - x_j) - x_j' for the n cars behind a
/// prescribed leader. `init` lists the followers from the rearmost car to the
/// one directly behind the leader. The run covers j = leader_index - n ..
/// leader_index, the last row being the leader itself.
LatticeRun simulate_followers(const OvfSpec& spec, const LeaderMotion& leader,
                              const std::vector<CarState>& init, double t_end,
                              Tolerance tol, const std::vector<double>& times,
                              int leader_index = 0);

/// max over sampled (j, t) of |x_j'' - V(x_{j+1} - x_j) + x_j'| for an
/// ansatz lattice, with x'' from central differences (step 1e-4) of the
/// profile's dense output. Samples whose stencil leaves the profile's domain
/// are skipped.
double ansatz_residual(const LatticeRun& run, const OvfSpec& spec);

}  // namespace wavefront
