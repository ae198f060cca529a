#pragma once

#include <memory>
#include <vector>

#include "wavefront/ovf.hpp"
#include "wavefront/rk23.hpp"
#include "wavefront/segment.hpp"

namespace wavefront {

/// Right-hand side of the first-order delayed system for w = (z, z'):
///   z'  = w2(0)
///   z'' = h^2 V(w1(-1) - w1(0)) + h w2(0)
State rhs(const OvfSpec& spec, double h, const Segment& seg);

/// Same map written in terms of the current state and the delayed position.
State rhs(const OvfSpec& spec, double h, State now, double z_delayed);

/// Dense numerical solution of the delayed system on [-1, t_end].
///
/// The delay is fixed at 1. On [-1, 0] the trajectory returns the initial
/// segment verbatim; on [0, t_end] the Hermite dense output of the
/// integrator. Positions are integrated relative to the anchor z(0): the
/// right-hand side only sees position differences, so error control and the
/// step sequence do not depend on where the profile sits.
class Trajectory {
 public:
  Trajectory(OvfSpec spec, double h, Segment history, Tolerance tol);

  State operator()(double t) const;

  /// z'' recovered from the right-hand side (exact for the computed state).
  double acceleration(double t) const;

  double t_begin() const { return -1.0; }
  double t_end() const;
  double h() const { return h_; }
  const OvfSpec& spec() const { return spec_; }
  const Segment& history() const { return history_; }
  const Tolerance& tolerance() const { return tol_; }
  const std::vector<double>& mesh() const { return dense_.mesh(); }
  const SolverStats& stats() const { return stats_; }

 private:
  friend Trajectory integrate(const OvfSpec&, double, const Segment&, double,
                              Tolerance);

  OvfSpec spec_;
  double h_;
  double anchor_ = 0.0;
  Segment history_;
  Tolerance tol_;
  DenseOutput dense_{2};
  SolverStats stats_;
};

/// Method-of-steps integration with the step size capped at the delay and
/// mesh points forced onto t = 1, 2, 3, 4.
Trajectory integrate(const OvfSpec& spec, double h, const Segment& phi, double t_end,
                     Tolerance tol = {});

/// K = sqrt(1 + h^2) + 2 h^2 V'(b).
double gronwall_constant(const OvfSpec& spec, double h);

struct GronwallReport {
  double k = 0.0;
  double phi_norm = 0.0;
  /// max over sampled t of |w_t| / (|phi| e^{K t}).
  double max_ratio = 0.0;
  bool holds = true;
};

/// Checks |w_t|_C <= |phi|_C e^{K t} on a 1/64 grid, with segment norms
/// taken as the sampled sup of the Euclidean norm over [t-1, t].
GronwallReport check_gronwall(const Trajectory& traj);

/// Re-integrates from the d-shifted history and compares against the
/// d-shifted trajectory pointwise within 10 (abs + rel |value|).
bool solution_offset_invariance_check(const Trajectory& traj, double d);

}  // namespace wavefront
