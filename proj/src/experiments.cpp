#include "wavefront/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <thread>

#include "wavefront/errors.hpp"

namespace wavefront {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string opt_field(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

void write_json(const fs::path& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

// Sample points t_from, t_from + dt, ... ending exactly at t_end.
std::vector<double> sample_times(double t_from, double t_end, double dt) {
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((t_end - t_from) / dt + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) out.push_back(t_from + static_cast<double>(k) * dt);
  if (t_end - out.back() > 1e-9 * dt) out.push_back(t_end);
  return out;
}

}  // namespace

WaveSetup select_wave(const ExperimentConfig& cfg) {
  WaveSetup s{make_vq(cfg.ovf.v_max, cfg.ovf.d_s), {}, {}};
  s.cp = critical_pair(s.spec);
  if (cfg.c) {
    s.point = make_point(s.spec, cfg.h, *cfg.c);
    if (std::abs(cfg.h * s.spec.eval(*cfg.c) - *cfg.c) > 1e-10 * std::max(1.0, *cfg.c)) {
      throw ParameterError("config: wave.c = " + format_double(*cfg.c) +
                           " does not satisfy h V(c) = c");
    }
    return s;
  }
  const Branch which = cfg.branch == 1 ? Branch::First : Branch::Second;
  auto p = branch_eval(s.spec, s.cp, cfg.h, which);
  if (!p) throw DomainError("branch " + std::to_string(cfg.branch) + " undefined at h");
  s.point = *p;
  return s;
}

Segment initial_segment(const ExperimentConfig& cfg, const WavefrontPoint& point) {
  const auto& in = cfg.initial;
  const auto& pert = cfg.perturbation;
  switch (in.kind) {
    case InitialKind::QuasiStationary:
      return Segment::affine(in.offset, -(point.c + pert.slope_offset), pert.amplitude);
    case InitialKind::Constant:
      return Segment::affine(in.offset, 0.0, pert.amplitude);
    case InitialKind::Affine:
      return Segment::affine(in.offset, in.slope + pert.slope_offset, pert.amplitude);
    case InitialKind::Sampled: {
      std::ifstream is(in.file);
      if (!is) throw ParameterError("config: cannot open " + in.file);
      std::vector<double> s, z, dz;
      std::string line;
      while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) {
          continue;
        }
        double a, b, c;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3) {
          throw ParameterError("config: malformed sample line '" + line + "'");
        }
        s.push_back(a);
        z.push_back(b + in.offset);
        dz.push_back(c + pert.amplitude);
      }
      return Segment::sampled(std::move(s), std::move(z), std::move(dz));
    }
  }
  throw ParameterError("config: unknown initial kind");
}

ExperimentConfig example_config(int n) {
  ExperimentConfig cfg;
  switch (n) {
    case 1:
      cfg.ovf.v_max = 100.0;
      cfg.h = 0.2;
      cfg.branch = 1;
      cfg.t_end = 50.0;
      break;
    case 2:
      cfg.ovf.v_max = 100.0;
      cfg.h = 0.2;
      cfg.branch = 2;
      cfg.t_end = 200.0;
      cfg.perturbation.amplitude = 1e-12;
      break;
    case 3:
      cfg.ovf.v_max = 2.841;
      cfg.h = 1.5;
      cfg.branch = 1;
      cfg.t_end = 1000.0;
      cfg.stats_from = 800.0;
      break;
    default:
      throw ParameterError("example must be 1, 2 or 3");
  }
  return cfg;
}

OscillationStats measure_oscillation(const Trajectory& traj, double t_from, double dt) {
  OscillationStats st;
  const double start = std::max(t_from, 0.0);
  const std::vector<double> ts = sample_times(start, traj.t_end(), dt);
  double prev_t = ts.front();
  double prev_a = traj.acceleration(prev_t);
  for (std::size_t k = 1; k < ts.size(); ++k) {
    const double t = ts[k];
    const double a = traj.acceleration(t);
    if ((prev_a < 0.0 && a >= 0.0) || (prev_a > 0.0 && a <= 0.0)) {
      double lo = prev_t, hi = t;
      const bool lo_neg = prev_a < 0.0;
      for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((traj.acceleration(mid) < 0.0) == lo_neg) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double te = 0.5 * (lo + hi);
      st.extremum_times.push_back(te);
      st.extremum_values.push_back(traj(te).dz);
    }
    prev_t = t;
    prev_a = a;
  }
  for (std::size_t k = 0; k + 1 < st.extremum_values.size(); k += 2) {
    st.peak_to_peak.push_back(std::abs(st.extremum_values[k + 1] - st.extremum_values[k]));
  }
  st.cycles = st.peak_to_peak.size();
  if (st.cycles >= 10) {
    const auto first = st.peak_to_peak.end() - 10;
    const auto [mn, mx] = std::minmax_element(first, st.peak_to_peak.end());
    double mean = 0.0;
    for (auto it = first; it != st.peak_to_peak.end(); ++it) mean += *it;
    mean /= 10.0;
    st.last_cycles_variation = (*mx - *mn) / mean;
  } else {
    st.last_cycles_variation = std::numeric_limits<double>::quiet_NaN();
  }
  return st;
}

SpeedDeviation speed_deviation(const Trajectory& traj, double c, double dt) {
  SpeedDeviation d;
  for (double t : sample_times(0.0, traj.t_end(), dt)) {
    d.sup = std::max(d.sup, std::abs(traj(t).dz + c));
  }
  d.terminal = std::abs(traj(traj.t_end()).dz + c);
  return d;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double dt, double t_from) {
  os << "t,z,dz\n";
  for (double t : sample_times(t_from, traj.t_end(), dt)) {
    const State w = traj(t);
    os << format_double(t) << ',' << format_double(w.z) << ',' << format_double(w.dz) << '\n';
  }
}

json point_json(const WaveSetup& s) {
  return {{"v_max", s.spec.v_max},
          {"d_s", s.spec.d_s},
          {"h", s.point.h},
          {"c", s.point.c},
          {"slope_product", s.point.slope_product},
          {"branch", to_string(s.point.branch)},
          {"c_star", s.cp.c_star},
          {"h_star", s.cp.h_star},
          {"h_hat", std::isinf(s.cp.h_hat) ? json("inf") : json(s.cp.h_hat)}};
}

json verdict_json(const StabilityVerdict& v) {
  json roots = json::array();
  for (Complex z : v.rightmost_roots) roots.push_back({z.real(), z.imag()});
  return {{"alpha", v.params.alpha},
          {"beta", v.params.beta},
          {"region", to_string(v.region)},
          {"classification", to_string(v.classification)},
          {"rightmost_roots", roots}};
}

json solver_json(const Trajectory& traj) {
  const GronwallReport g = check_gronwall(traj);
  return {{"t_end", traj.t_end()},
          {"tol_rel", traj.tolerance().rel},
          {"tol_abs", traj.tolerance().abs},
          {"steps", traj.stats().steps},
          {"rejected", traj.stats().rejected},
          {"rhs_evals", traj.stats().rhs_evals},
          {"gronwall_K", g.k},
          {"gronwall_max_ratio", g.max_ratio},
          {"gronwall_holds", g.holds}};
}

Bundle run_simulation(const ExperimentConfig& cfg, const fs::path& out_dir,
                      const std::string& name) {
  const WaveSetup setup = select_wave(cfg);
  const Segment phi = initial_segment(cfg, setup.point);
  const Trajectory traj = integrate(setup.spec, cfg.h, phi, cfg.t_end, cfg.tol);

  Bundle b;
  b.summary = {{"wave", point_json(setup)},
               {"initial", {{"kind", to_string(cfg.initial.kind)},
                            {"offset", cfg.initial.offset},
                            {"slope_offset", cfg.perturbation.slope_offset},
                            {"amplitude", cfg.perturbation.amplitude}}},
               {"solver", solver_json(traj)},
               {"output_dt", cfg.output_dt}};
  const fs::path csv = out_dir / (name + ".csv");
  {
    auto os = open_out(csv);
    write_trajectory_csv(os, traj, cfg.output_dt);
  }
  const fs::path js = out_dir / (name + ".json");
  write_json(js, b.summary);
  b.files = {csv, js};
  return b;
}

Bundle run_perturbed(const ExperimentConfig& cfg, const fs::path& out_dir,
                     const std::string& name) {
  const WaveSetup setup = select_wave(cfg);
  const Segment phi = initial_segment(cfg, setup.point);
  const Trajectory traj = integrate(setup.spec, cfg.h, phi, cfg.t_end, cfg.tol);
  const SpeedDeviation dev = speed_deviation(traj, setup.point.c, cfg.output_dt);
  const OscillationStats osc = measure_oscillation(traj, cfg.stats_from, cfg.output_dt);

  Bundle b;
  b.summary = {{"wave", point_json(setup)},
               {"perturbation", {{"slope_offset", cfg.perturbation.slope_offset},
                                 {"amplitude", cfg.perturbation.amplitude}}},
               {"solver", solver_json(traj)},
               {"deviation", {{"sup", dev.sup}, {"terminal", dev.terminal}}},
               {"oscillation",
                {{"from", cfg.stats_from},
                 {"cycles", osc.cycles},
                 {"last_cycles_variation",
                  std::isnan(osc.last_cycles_variation) ? json(nullptr)
                                                        : json(osc.last_cycles_variation)},
                 {"last_peak_to_peak",
                  osc.peak_to_peak.empty() ? json(nullptr) : json(osc.peak_to_peak.back())}}}};
  const fs::path csv = out_dir / (name + ".csv");
  {
    auto os = open_out(csv);
    write_trajectory_csv(os, traj, cfg.output_dt);
  }
  const fs::path js = out_dir / (name + ".json");
  write_json(js, b.summary);
  b.files = {csv, js};
  return b;
}

Bundle run_example(int n, const fs::path& out_dir, const std::optional<Tolerance>& tol,
                   const std::optional<double>& dt) {
  ExperimentConfig cfg = example_config(n);
  if (tol) cfg.tol = *tol;
  if (dt) cfg.output_dt = *dt;
  validate(cfg);
  const WaveSetup setup = select_wave(cfg);
  const StabilityVerdict verdict = classify_wavefront(setup.spec, setup.point);
  const Trajectory traj =
      integrate(setup.spec, cfg.h, initial_segment(cfg, setup.point), cfg.t_end, cfg.tol);
  const SpeedDeviation dev = speed_deviation(traj, setup.point.c, cfg.output_dt);

  json notes = json::array();
  notes.push_back("beta = h^2 V'(c) (derivative of V, not V itself)");
  if (n == 3) {
    notes.push_back("beta = h^2 V(c) would not give 2.8245; h^2 V'(c) does");
    notes.push_back("h_star = 2 / v_max for this OVF, so 0.8127 is not the critical h here");
  }
  if (n == 2) {
    notes.push_back("the affine state is reproduced exactly by the integrator, so a 1e-12 "
                    "velocity offset stands in for rounding noise");
  }
  if (n == 3) {
    notes.push_back("started exactly on the quasi-stationary state; departure from it is "
                    "driven by floating-point rounding");
  }

  const std::string name = "example" + std::to_string(n);
  Bundle b;
  b.summary = {{"example", n},
               {"wave", point_json(setup)},
               {"verdict", verdict_json(verdict)},
               {"solver", solver_json(traj)},
               {"deviation", {{"sup", dev.sup}, {"terminal", dev.terminal}}},
               {"notes", notes}};
  if (n == 3) {
    const OscillationStats osc = measure_oscillation(traj, cfg.stats_from, cfg.output_dt);
    b.summary["oscillation"] = {
        {"from", cfg.stats_from},
        {"cycles", osc.cycles},
        {"last_cycles_variation", std::isnan(osc.last_cycles_variation)
                                      ? json(nullptr)
                                      : json(osc.last_cycles_variation)}};
  }
  const fs::path csv = out_dir / (name + ".csv");
  {
    auto os = open_out(csv);
    write_trajectory_csv(os, traj, cfg.output_dt);
  }
  const fs::path js = out_dir / (name + ".json");
  write_json(js, b.summary);
  b.files = {csv, js};
  return b;
}

SweepResult sweep(const OvfSpec& spec, double lo, double hi, int samples) {
  if (!(lo < hi) || samples < 2 || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("sweep: need h_min < h_max and at least 2 samples");
  }
  const CriticalPair cp = critical_pair(spec);
  if (!(hi > cp.h_star)) {
    throw DomainError("sweep: range lies entirely at or below h_star = " +
                      format_double(cp.h_star));
  }
  const std::vector<double> hs = linspace(lo, hi, static_cast<std::size_t>(samples));

  SweepResult result;
  result.rows.resize(hs.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SweepRow& row = result.rows[i];
      row.h = hs[i];
      if (!(row.h > cp.h_star)) continue;
      if (auto p2 = branch_eval(spec, cp, row.h, Branch::Second)) row.c2 = p2->c;
      if (auto p1 = branch_eval(spec, cp, row.h, Branch::First)) {
        row.c1 = p1->c;
        const StabilityVerdict v = classify_wavefront(spec, *p1);
        row.params = v.params;
        row.region = v.region;
        row.verdict = v.classification;
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, hs.size());
  std::vector<std::future<void>> jobs;
  const std::size_t chunk = (hs.size() + workers - 1) / workers;
  for (std::size_t begin = 0; begin < hs.size(); begin += chunk) {
    jobs.push_back(std::async(std::launch::async, work, begin, std::min(hs.size(), begin + chunk)));
  }
  for (auto& j : jobs) j.get();

  std::optional<std::size_t> first_flip;
  for (std::size_t i = 0; i + 1 < result.rows.size(); ++i) {
    const auto& a = result.rows[i].region;
    const auto& b = result.rows[i + 1].region;
    if (!a || !b) continue;
    if ((*a == Region::InsideS) != (*b == Region::InsideS)) {
      ++result.region_flips;
      if (!first_flip) first_flip = i;
    }
  }
  if (first_flip) {
    const double h_a = result.rows[*first_flip].h;
    const double h_b = result.rows[*first_flip + 1].h;
    if (h_b <= 2.0) {
      try {
        result.crossing = hopf_crossing(spec, h_a, h_b);
      } catch (const DomainError&) {
        // The flip can pass through G1 or the corner instead of C1.
      }
    }
  }
  return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  if (r.crossing) {
    os << "# h_H=" << format_double(r.crossing->h)
       << ", omega=" << format_double(r.crossing->omega) << '\n';
  }
  os << "h,c1,c2,alpha,beta,region,verdict\n";
  for (const SweepRow& row : r.rows) {
    os << format_double(row.h) << ',' << opt_field(row.c1) << ',' << opt_field(row.c2) << ','
       << (row.params ? format_double(row.params->alpha) : "") << ','
       << (row.params ? format_double(row.params->beta) : "") << ','
       << (row.region ? to_string(*row.region) : "") << ','
       << (row.verdict ? to_string(*row.verdict) : "") << '\n';
  }
}

void write_branches_csv(std::ostream& os, const OvfSpec& spec, double lo, double hi,
                        int samples) {
  if (!(lo < hi) || samples < 2 || !(lo > 0.0)) {
    throw DomainError("branches: need 0 < h_min < h_max and at least 2 samples");
  }
  const CriticalPair cp = critical_pair(spec);
  os << "# c_star=" << format_double(cp.c_star) << ", h_star=" << format_double(cp.h_star)
     << ", h_hat=" << (std::isinf(cp.h_hat) ? std::string("inf") : format_double(cp.h_hat))
     << '\n';
  os << "h,c1,c2,hVp_c1,hVp_c2\n";
  for (double h : linspace(lo, hi, static_cast<std::size_t>(samples))) {
    std::optional<WavefrontPoint> p1, p2;
    if (h > cp.h_star) {
      p1 = branch_eval(spec, cp, h, Branch::First);
      p2 = branch_eval(spec, cp, h, Branch::Second);
    }
    os << format_double(h) << ',' << (p1 ? format_double(p1->c) : "") << ','
       << (p2 ? format_double(p2->c) : "") << ','
       << (p1 ? format_double(p1->slope_product) : "") << ','
       << (p2 ? format_double(p2->slope_product) : "") << '\n';
  }
}

void write_region_boundary_csv(std::ostream& os, int samples) {
  if (samples < 2) throw ParameterError("stability-region: need at least 2 boundary samples");
  constexpr double kPi = std::numbers::pi;
  os << "curve,alpha,beta\n";
  for (double b : linspace(0.0, kPi * kPi / 2.0, static_cast<std::size_t>(samples))) {
    os << "G0,0," << format_double(b) << '\n';
  }
  for (double a : linspace(-2.0, 0.0, static_cast<std::size_t>(samples))) {
    os << "G1," << format_double(a) << ',' << format_double(-a) << '\n';
  }
  for (double a : linspace(-2.0, 0.0, static_cast<std::size_t>(samples))) {
    os << "C1," << format_double(a) << ',' << format_double(*c1_boundary_beta(a)) << '\n';
  }
}

void write_region_grid_csv(std::ostream& os, int alpha_samples, int beta_samples) {
  if (alpha_samples < 2 || beta_samples < 2) {
    throw ParameterError("stability-region: need at least 2 grid samples per axis");
  }
  os << "alpha,beta,region\n";
  for (double a : linspace(-3.0, 0.0, static_cast<std::size_t>(alpha_samples))) {
    for (double b : linspace(0.0, 6.0, static_cast<std::size_t>(beta_samples))) {
      os << format_double(a) << ',' << format_double(b) << ','
         << to_string(region_classify({a, b})) << '\n';
    }
  }
}

void write_lattice_csv(std::ostream& os, const LatticeRun& run, bool headways) {
  os << (headways ? "t,j,headway\n" : "t,j,x,v\n");
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    for (int j = run.j_min; j <= run.j_max; ++j) {
      if (headways) {
        if (j == run.j_max) continue;
        os << format_double(run.times[k]) << ',' << j << ','
           << format_double(run.headway(j, k)) << '\n';
      } else {
        os << format_double(run.times[k]) << ',' << j << ',' << format_double(run.x(j, k))
           << ',' << format_double(run.v(j, k)) << '\n';
      }
    }
  }
}

LatticeResult run_lattice(const ExperimentConfig& cfg) {
  const WaveSetup setup = select_wave(cfg);
  const auto& lc = cfg.lattice;
  const double reach = -lc.t_min / cfg.h - static_cast<double>(lc.j_min);
  auto profile = std::make_shared<const Trajectory>(integrate(
      setup.spec, cfg.h, initial_segment(cfg, setup.point), std::max(cfg.t_end, reach), cfg.tol));
  if (lc.samples < 1 || !(lc.t_max >= lc.t_min)) {
    throw ParameterError("lattice: invalid time window");
  }
  const std::vector<double> times =
      time_grid(lc.t_min, lc.t_max, static_cast<std::size_t>(lc.samples));

  LatticeResult out;
  out.ansatz = wavefront_to_lattice(profile, lc.j_min, lc.j_max, times);
  out.residual = ansatz_residual(out.ansatz, setup.spec);

  if (lc.followers > 0) {
    if (lc.t_min < 0.0) throw ParameterError("lattice: direct simulation needs t_min >= 0");
    const double h = cfg.h;
    const int lead = lc.j_max;
    auto on_ansatz = [&](int j, double t) {
      const State w = (*profile)(-t / h - static_cast<double>(j));
      return CarState{w.z, -w.dz / h};
    };
    std::vector<CarState> init;
    for (int j = lead - lc.followers; j < lead; ++j) init.push_back(on_ansatz(j, 0.0));
    LeaderMotion leader = [&](double t) { return on_ansatz(lead, t); };
    out.direct = simulate_followers(setup.spec, leader, init, lc.t_max, cfg.tol, times, lead);
    for (int j = lead - lc.followers; j < lead; ++j) {
      for (std::size_t k = 0; k < times.size(); ++k) {
        out.max_deviation =
            std::max(out.max_deviation, std::abs(out.direct->x(j, k) - on_ansatz(j, times[k]).x));
      }
    }
  }
  return out;
}

}  // namespace wavefront
