// Acceptance checks: one PASS/FAIL line per criterion.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <string>

#include "oracles.hpp"
#include "wavefront/errors.hpp"
#include "wavefront/experiments.hpp"

using namespace wavefront;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const OvfSpec kV100 = make_vq(100.0, 0.0);
const OvfSpec kV2841 = make_vq(2.841, 0.0);

Outcome branch_roots() {
  const auto r = find_constant_speeds(kV100, 0.2);
  if (r.size() != 2) return {false, "expected 2 roots, got " + std::to_string(r.size())};
  const double q1 = 10.0 - std::sqrt(99.0), q2 = 10.0 + std::sqrt(99.0);
  const double e_rounded = std::max(std::abs(r[0].c - 0.0501), std::abs(r[1].c - 19.9499));
  const double e_exact = std::max(std::abs(r[0].c - q1), std::abs(r[1].c - q2));
  return {e_rounded < 1e-4 && e_exact < 1e-10,
          fmt("c1=%.12g c2=%.12g, |err| vs rounded %.2e, vs quadratic %.2e", r[0].c, r[1].c,
              e_rounded, e_exact)};
}

Outcome critical() {
  double worst = 0.0;
  for (double vm : {100.0, 2.841, 1.0}) {
    const CriticalPair cp = critical_pair(make_vq(vm, 0.0));
    worst = std::max({worst, std::abs(cp.c_star - 1.0), std::abs(cp.h_star - 2.0 / vm)});
  }
  return {worst < 1e-8, fmt("max deviation from (1, 2/v_max) = %.2e", worst)};
}

Outcome beta_values() {
  const double b1 = stability_params(kV100, *branch_eval(kV100, 0.2, Branch::First)).beta;
  const double b3 = stability_params(kV2841, *branch_eval(kV2841, 1.5, Branch::First)).beta;
  return {std::abs(b1 - 0.39899) < 1e-4 && std::abs(b3 - 2.8245) < 1e-3,
          fmt("beta1=%.8f beta3=%.8f", b1, b3)};
}

Outcome verdicts() {
  const auto v1 = classify_wavefront(kV100, *branch_eval(kV100, 0.2, Branch::First));
  const auto v2 = classify_wavefront(kV100, *branch_eval(kV100, 0.2, Branch::Second));
  const auto v3 = classify_wavefront(kV2841, *branch_eval(kV2841, 1.5, Branch::First));
  const bool ok = v1.classification == Classification::Stable &&
                  v1.region == Region::InsideS &&
                  v2.classification == Classification::Unstable &&
                  v2.params.beta < -v2.params.alpha &&
                  v3.classification == Classification::Unstable &&
                  v3.region == Region::OutsideS;
  return {ok, "ex1 " + to_string(v1.classification) + "/" + to_string(v1.region) + ", ex2 " +
                  to_string(v2.classification) + "/" + to_string(v2.region) + ", ex3 " +
                  to_string(v3.classification) + "/" + to_string(v3.region)};
}

Outcome region_boundary() {
  const double e0 = std::abs(*c1_boundary_beta(0.0) - std::numbers::pi * std::numbers::pi / 2);
  const double e2 = std::abs(*c1_boundary_beta(-2.0) - 2.0);
  double worst = 0.0;
  for (double a : linspace(-1.999, -0.001, 500)) {
    const auto p = *c1_boundary(a);
    worst = std::max({worst, std::abs(oracle::c1_alpha(p.nu) - a),
                      std::abs(oracle::c1_beta(p.nu) - p.beta)});
  }
  return {e0 < 1e-9 && e2 < 1e-9 && worst < 1e-10,
          fmt("endpoint errors %.1e, %.1e; max parametric residual %.1e", e0, e2, worst)};
}

Outcome root_finder() {
  const double beta = 0.04 * oracle::vq_prime(100.0, 0.0, oracle::quad_large(0.2, 100.0));
  const StabilityParams p{-0.2, beta};
  const auto roots = rightmost_roots(p, Rect{-0.05, 1.0, -5.0, 5.0});
  bool found = false;
  double nearest = INFINITY, nearest_chi = INFINITY;
  for (Complex z : roots) {
    if (std::abs(z.imag()) > 1e-12 || z.real() <= 0.0) continue;
    const double chi = std::abs(char_eval(p, z));
    if (std::abs(z.real() - 0.19897) < std::abs(nearest - 0.19897)) {
      nearest = z.real();
      nearest_chi = chi;
    }
    found = found || (std::abs(z.real() - 0.19897) <= 1e-4 && chi < 1e-10);
  }
  int disagreements = 0;
  for (double a : linspace(-2.93, -0.07, 20)) {
    for (double b : linspace(0.11, 5.97, 20)) {
      const StabilityParams q{a, b};
      const bool inside = region_classify(q) == Region::InsideS;
      bool unstable = false;
      for (Complex z : rightmost_roots(q)) unstable = unstable || z.real() > 1e-8;
      if (inside == unstable) ++disagreements;
    }
  }
  return {found && disagreements == 0,
          fmt("real root %.10f (|chi|=%.1e), target 0.19897 +- 1e-4, |diff|=%.2e; "
              "grid disagreements %.0f",
              nearest, nearest_chi, std::abs(nearest - 0.19897), disagreements)};
}

Outcome solver_fidelity() {
  const double c = oracle::quad_small(0.2, 100.0);
  const Trajectory qs = integrate(kV100, 0.2, Segment::quasi_stationary(c, 0.0), 50.0);
  double dev = 0.0;
  for (double t : linspace(0.0, 50.0, 5001)) dev = std::max(dev, std::abs(qs(t).dz + c));

  const Segment pert = Segment::quasi_stationary(c - 0.005, 0.0);
  const Trajectory ref = integrate(kV100, 0.2, pert, 20.0, {1e-12, 1e-14});
  double prev = INFINITY;
  bool monotone = true;
  std::string errs;
  double tol = 1e-5;
  std::vector<Trajectory> runs;
  for (int k = 0; k < 4; ++k, tol /= 2.0) {
    runs.push_back(integrate(kV100, 0.2, pert, 20.0, {tol, tol * 1e-3}));
    double e = 0.0;
    for (double t : linspace(0.0, 20.0, 2001)) e = std::max(e, std::abs(runs.back()(t).z - ref(t).z));
    monotone = monotone && e < prev;
    prev = e;
    errs += fmt(" %.2e", e);
  }

  const double c3 = oracle::quad_small(1.5, 2.841);
  runs.push_back(qs);
  runs.push_back(ref);
  runs.push_back(integrate(kV100, 0.2, Segment::constant(2.0), 10.0));
  runs.push_back(integrate(kV2841, 1.5, Segment::affine(0.0, -c3, 1e-8), 300.0));
  bool gronwall = true;
  double worst_ratio = 0.0;
  for (const auto& r : runs) {
    const auto g = check_gronwall(r);
    gronwall = gronwall && g.holds;
    worst_ratio = std::max(worst_ratio, g.max_ratio);
  }
  return {dev <= 1e-6 && monotone && gronwall,
          fmt("sup|z'+c| on [0,50] = %.1e; Gronwall holds on all runs (max ratio %.3g); ", dev,
              worst_ratio) +
              "errors over halvings:" + errs + (monotone ? " (decreasing)" : " (NOT decreasing)")};
}

Outcome attraction() {
  const double c = oracle::quad_small(0.2, 100.0);
  const Trajectory tr = integrate(kV100, 0.2, Segment::quasi_stationary(c - 0.005, 0.0), 40.0);
  const double d = std::abs(tr(40.0).dz + c);
  return {d < 1e-3, fmt("|z'(40)+c| = %.2e", d)};
}

Outcome phenomenology() {
  const double c = oracle::quad_small(1.5, 2.841);
  const Trajectory tr = integrate(kV2841, 1.5, Segment::affine(0.0, -c, 1e-8), 800.0);
  const OscillationStats early = measure_oscillation(tr, 0.0, 0.01);
  const OscillationStats late = measure_oscillation(tr, 600.0, 0.01);
  if (early.peak_to_peak.size() < 20 || late.cycles < 10) {
    return {false, "too few oscillation cycles"};
  }
  const double first = early.peak_to_peak[2];
  const double mid = early.peak_to_peak[early.peak_to_peak.size() / 4];
  const double last = late.peak_to_peak.back();
  const bool grows = first < mid && mid < last;
  const double var = late.last_cycles_variation;
  return {grows && var < 0.01,
          fmt("peak-to-peak %.2e -> %.2e -> %.4f; last-10-cycle variation %.2e", first, mid,
              last, var)};
}

Outcome hopf() {
  const CriticalPair cp = critical_pair(kV2841);
  const SweepResult s = sweep(kV2841, cp.h_star + 0.01, 1.5, 100);
  if (!s.crossing) return {false, fmt("no crossing located; flips=%.0f", s.region_flips)};
  const HopfCrossing& x = *s.crossing;
  const double chi = std::abs(oracle::chi(x.params.alpha, x.params.beta, {0.0, x.omega}));
  const auto lo = classify_wavefront(kV2841, *branch_eval(kV2841, x.h - 1e-4, Branch::First));
  const auto hi = classify_wavefront(kV2841, *branch_eval(kV2841, x.h + 1e-4, Branch::First));
  const bool flip = lo.classification == Classification::Stable &&
                    hi.classification == Classification::Unstable;
  return {s.region_flips == 1 && chi < 1e-8 && flip,
          fmt("flips=%.0f h_H=%.12f omega=%.12f |chi(i omega)|=%.1e", s.region_flips, x.h,
              x.omega, chi) +
              ", verdict " + to_string(lo.classification) + " -> " +
              to_string(hi.classification)};
}

Outcome lattice() {
  const double h = 0.2;
  const double c = oracle::quad_small(h, 100.0);
  const auto times = time_grid(0.0, 20.0, 201);

  const LeaderMotion leader = [&](double t) { return CarState{c / h * t, c / h}; };
  std::vector<CarState> init;
  for (int j = -10; j < 0; ++j) init.push_back({c * j, c / h});
  const LatticeRun direct = simulate_followers(kV100, leader, init, 20.0, {}, times);
  double dev = 0.0;
  for (int j = -10; j < 0; ++j) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      dev = std::max(dev, std::abs(direct.x(j, k) - (c / h * times[k] + c * j)));
    }
  }

  auto profile = std::make_shared<const Trajectory>(
      integrate(kV100, h, Segment::quasi_stationary(c, 0.0), 110.0));
  const LatticeRun ansatz = wavefront_to_lattice(profile, -110, -100, times);
  const double residual = ansatz_residual(ansatz, kV100);
  double hw = 0.0, vel = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (int j = -110; j <= -100; ++j) {
      vel = std::max(vel, std::abs(ansatz.v(j, k) - c / h));
      if (j < -100) hw = std::max(hw, std::abs(ansatz.headway(j, k) - c));
    }
  }
  return {dev < 1e-6 && residual < 1e-8 && hw < 1e-12 && vel < 1e-12,
          fmt("follower deviation %.1e, ansatz residual %.1e, |headway-c| %.1e, "
              "|v-c/h| %.1e",
              dev, residual, hw, vel)};
}

}  // namespace

int main() {
  report(1, "branch roots", branch_roots);
  report(2, "critical pair", critical);
  report(3, "stability parameters", beta_values);
  report(4, "verdicts", verdicts);
  report(5, "region boundary", region_boundary);
  report(6, "root finder", root_finder);
  report(7, "solver fidelity", solver_fidelity);
  report(8, "attraction", attraction);
  report(9, "instability phenomenology", phenomenology);
  report(10, "hopf crossing", hopf);
  report(11, "lattice consistency", lattice);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
