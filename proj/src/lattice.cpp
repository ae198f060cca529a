#include "wavefront/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavefront/errors.hpp"

namespace wavefront {

namespace {

std::size_t count_violations(const LatticeRun& run) {
  std::size_t bad = 0;
  for (int j = run.j_min; j < run.j_max; ++j) {
    for (std::size_t k = 0; k < run.times.size(); ++k) {
      if (!(run.headway(j, k) > 0.0)) ++bad;
    }
  }
  return bad;
}

}  // namespace

std::vector<double> time_grid(double t0, double t1, std::size_t samples) {
  return linspace(t0, t1, samples);
}

LatticeRun wavefront_to_lattice(std::shared_ptr<const Trajectory> profile, int j_min,
                                int j_max, const std::vector<double>& times) {
  if (!profile) throw ParameterError("wavefront_to_lattice: missing profile");
  if (j_max < j_min) throw ParameterError("wavefront_to_lattice: empty index range");
  const double h = profile->h();
  LatticeRun run;
  run.j_min = j_min;
  run.j_max = j_max;
  run.times = times;
  run.source = LatticeSource::Ansatz;
  run.position.assign(run.cars(), std::vector<double>(times.size()));
  run.velocity.assign(run.cars(), std::vector<double>(times.size()));
  for (int j = j_min; j <= j_max; ++j) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double arg = -times[k] / h - static_cast<double>(j);
      if (!(arg >= profile->t_begin() && arg <= profile->t_end())) {
        std::ostringstream os;
        os.precision(17);
        os << "wavefront_to_lattice: (j=" << j << ", t=" << times[k] << ") maps to "
           << arg << " outside [" << profile->t_begin() << ", " << profile->t_end()
           << "]";
        throw DomainError(os.str());
      }
      const State w = (*profile)(arg);
      run.position[static_cast<std::size_t>(j - j_min)][k] = w.z;
      run.velocity[static_cast<std::size_t>(j - j_min)][k] = -w.dz / h;
    }
  }
  run.ordering_violations = count_violations(run);
  run.profile = std::move(profile);
  return run;
}

LatticeRun simulate_followers(const OvfSpec& spec, const LeaderMotion& leader,
                              const std::vector<CarState>& init, double t_end,
                              Tolerance tol, const std::vector<double>& times,
                              int leader_index) {
  const std::size_t n = init.size();
  if (n == 0) throw ParameterError("simulate_followers: need at least one follower");
  if (!(t_end > 0.0)) throw ParameterError("simulate_followers: t_end must be positive");
  const CarState lead0 = leader(0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double ahead = k + 1 < n ? init[k + 1].x : lead0.x;
    if (!(init[k].x < ahead)) {
      throw ParameterError("simulate_followers: initial positions must increase "
                           "strictly toward the leader");
    }
  }
  for (double t : times) {
    if (!(t >= 0.0 && t <= t_end)) {
      throw ParameterError("simulate_followers: output time outside [0, t_end]");
    }
  }

  OdeRhs f = [&](double t, std::span<const double> y, std::span<double> dy) {
    for (std::size_t k = 0; k < n; ++k) {
      const double ahead = k + 1 < n ? y[2 * (k + 1)] : leader(t).x;
      dy[2 * k] = y[2 * k + 1];
      dy[2 * k + 1] = spec.eval(ahead - y[2 * k]) - y[2 * k + 1];
    }
  };
  std::vector<double> y0(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    y0[2 * k] = init[k].x;
    y0[2 * k + 1] = init[k].v;
  }
  StepOptions opts;
  opts.tol = tol;
  DenseOutput dense(2 * n);
  integrate_bs23(f, 0.0, y0, t_end, opts, dense);

  LatticeRun run;
  run.j_min = leader_index - static_cast<int>(n);
  run.j_max = leader_index;
  run.times = times;
  run.source = LatticeSource::DirectOde;
  run.position.assign(n + 1, std::vector<double>(times.size()));
  run.velocity.assign(n + 1, std::vector<double>(times.size()));
  std::vector<double> y(2 * n);
  for (std::size_t k = 0; k < times.size(); ++k) {
    dense.eval(times[k], y);
    for (std::size_t c = 0; c < n; ++c) {
      run.position[c][k] = y[2 * c];
      run.velocity[c][k] = y[2 * c + 1];
    }
    const CarState l = leader(times[k]);
    run.position[n][k] = l.x;
    run.velocity[n][k] = l.v;
  }
  run.ordering_violations = count_violations(run);
  return run;
}

double ansatz_residual(const LatticeRun& run, const OvfSpec& spec) {
  if (run.source != LatticeSource::Ansatz || !run.profile) {
    throw ParameterError("ansatz_residual: run must be built from a wavefront profile");
  }
  const Trajectory& z = *run.profile;
  const double h = z.h();
  constexpr double kStep = 1e-4;
  double worst = 0.0;
  for (int j = run.j_min; j < run.j_max; ++j) {
    for (double t : run.times) {
      const double s = -t / h - static_cast<double>(j);
      const double s_fwd = -(t + kStep) / h - static_cast<double>(j);
      const double s_bwd = -(t - kStep) / h - static_cast<double>(j);
      const double lo = std::min({s, s_fwd, s_bwd, s - 1.0});
      const double hi = std::max({s, s_fwd, s_bwd});
      if (lo < z.t_begin() || hi > z.t_end()) continue;
      const double acc = (-z(s_fwd).dz / h + z(s_bwd).dz / h) / (2.0 * kStep);
      const State self = z(s);
      const double ahead = z(s - 1.0).z;
      const double res = acc - spec.eval(ahead - self.z) + (-self.dz / h);
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

}  // namespace wavefront
