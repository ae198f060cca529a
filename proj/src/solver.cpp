#include "wavefront/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

#include "wavefront/errors.hpp"

namespace wavefront {

State rhs(const OvfSpec& spec, double h, State now, double z_delayed) {
  return {now.dz, h * h * spec.eval(z_delayed - now.z) + h * now.dz};
}

State rhs(const OvfSpec& spec, double h, const Segment& seg) {
  if (!(h > 0.0)) throw ParameterError("rhs: h must be positive");
  return rhs(spec, h, seg(0.0), seg(-1.0).z);
}

Trajectory::Trajectory(OvfSpec spec, double h, Segment history, Tolerance tol)
    : spec_(std::move(spec)), h_(h), history_(std::move(history)), tol_(tol) {}

double Trajectory::t_end() const { return dense_.empty() ? 0.0 : dense_.t_end(); }

State Trajectory::operator()(double t) const {
  if (t <= 0.0) return history_(t);
  std::array<double, 2> y{};
  dense_.eval(t, y);
  return {anchor_ + y[0], y[1]};
}

double Trajectory::acceleration(double t) const {
  const State now = (*this)(t);
  return rhs(spec_, h_, now, (*this)(t - 1.0).z).dz;
}

Trajectory integrate(const OvfSpec& spec, double h, const Segment& phi, double t_end,
                     Tolerance tol) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ParameterError("integrate: h must be positive");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw ParameterError("integrate: t_end must be positive");
  }
  if (!(tol.rel >= 1e-12) || !(tol.abs > 0.0)) {
    throw ParameterError("integrate: need tol.rel >= 1e-12 and tol.abs > 0");
  }

  Trajectory traj(spec, h, phi, tol);
  const DenseOutput& dense = traj.dense_;
  const Segment& history = traj.history_;
  const State w0 = phi(0.0);
  const double anchor = w0.z;
  traj.anchor_ = anchor;

  // (t + 1) - 1 may round one ulp past the last knot.
  auto delayed = [&](double tau) {
    return tau <= 0.0 ? history(tau).z - anchor
                      : dense.eval(std::min(tau, dense.t_end()), 0);
  };
  OdeRhs f = [&](double t, std::span<const double> y, std::span<double> dy) {
    const State r = rhs(spec, h, State{y[0], y[1]}, delayed(t - 1.0));
    dy[0] = r.z;
    dy[1] = r.dz;
  };

  StepOptions opts;
  opts.tol = tol;
  opts.max_step = 1.0;
  opts.breakpoints = {1.0, 2.0, 3.0, 4.0};

  const std::array<double, 2> y0{0.0, w0.dz};
  traj.stats_ = integrate_bs23(f, 0.0, y0, t_end, opts, traj.dense_);
  return traj;
}

double gronwall_constant(const OvfSpec& spec, double h) {
  return std::sqrt(1.0 + h * h) + 2.0 * h * h * spec.deriv(spec.b);
}

GronwallReport check_gronwall(const Trajectory& traj) {
  constexpr int kPerUnit = 64;
  GronwallReport rep;
  rep.k = gronwall_constant(traj.spec(), traj.h());
  rep.phi_norm = traj.history().sup_norm(kPerUnit);

  // Pointwise norms on the uniform grid t_i = -1 + i/64, then a sliding
  // maximum over windows of 65 samples gives |w_t|_C at t_i.
  const auto n_total =
      static_cast<std::size_t>(std::floor((traj.t_end() + 1.0) * kPerUnit)) + 1;
  std::vector<double> norms(n_total);
  for (std::size_t i = 0; i < n_total; ++i) {
    const double t = std::min(-1.0 + static_cast<double>(i) / kPerUnit, traj.t_end());
    const State w = traj(t);
    norms[i] = std::hypot(w.z, w.dz);
  }

  const double slack = 10.0 * traj.tolerance().abs;
  std::deque<std::size_t> window;
  for (std::size_t i = 0; i < n_total; ++i) {
    while (!window.empty() && norms[window.back()] <= norms[i]) window.pop_back();
    window.push_back(i);
    if (i < static_cast<std::size_t>(kPerUnit)) continue;
    while (window.front() + kPerUnit < i) window.pop_front();
    const double t = -1.0 + static_cast<double>(i) / kPerUnit;
    const double seg_norm = norms[window.front()];
    const double bound = rep.phi_norm * std::exp(rep.k * t);
    if (bound > 0.0 && std::isfinite(bound)) {
      rep.max_ratio = std::max(rep.max_ratio, seg_norm / bound);
    }
    if (seg_norm > bound * (1.0 + 1e-9) + slack) rep.holds = false;
  }
  return rep;
}

bool solution_offset_invariance_check(const Trajectory& traj, double d) {
  const Trajectory shifted = integrate(traj.spec(), traj.h(), traj.history().shifted(d),
                                       traj.t_end(), traj.tolerance());
  const Tolerance tol = traj.tolerance();
  auto close = [&](double a, double b) {
    return std::abs(a - b) <= 10.0 * (tol.abs + tol.rel * std::max(std::abs(a), std::abs(b)));
  };
  std::vector<double> probes = traj.mesh();
  const std::vector<double>& other = shifted.mesh();
  probes.insert(probes.end(), other.begin(), other.end());
  for (double t : probes) {
    const State a = traj(t);
    const State b = shifted(t);
    if (!close(a.z + d, b.z) || !close(a.dz, b.dz)) return false;
  }
  return true;
}

}  // namespace wavefront
