#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wavefront/errors.hpp"
#include "wavefront/experiments.hpp"

namespace fs = std::filesystem;
using namespace wavefront;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<double> tol_rel;
  std::optional<double> tol_abs;
  std::optional<double> dt;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment config file");
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--tol-rel", c.tol_rel, "relative tolerance");
  cmd->add_option("--tol-abs", c.tol_abs, "absolute tolerance");
  cmd->add_option("--dt", c.dt, "output sampling step");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.tol_rel) cfg.tol.rel = *c.tol_rel;
  if (c.tol_abs) cfg.tol.abs = *c.tol_abs;
  if (c.dt) cfg.output_dt = *c.dt;
  validate(cfg);
  return cfg;
}

std::ofstream open_file(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw Error("cannot write " + (dir / name).string());
  return os;
}

void report(const fs::path& path) { std::cerr << "wrote " << path.string() << '\n'; }

void report(const Bundle& b) {
  for (const auto& f : b.files) report(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-speed wavefronts of an optimal-velocity car-following delay equation"};
  app.require_subcommand(1);

  Common common;
  auto* branches = app.add_subcommand("branches", "c1/c2 branch table over an h range");
  auto* region = app.add_subcommand("stability-region", "region S boundary curves and grid");
  auto* classify = app.add_subcommand("classify", "stability verdict for the configured wave");
  auto* simulate = app.add_subcommand("simulate", "integrate from the configured initial segment");
  auto* perturb = app.add_subcommand("perturb", "perturbed run with deviation statistics");
  auto* lattice = app.add_subcommand("lattice", "lattice positions generated by the profile");
  auto* sweep_cmd = app.add_subcommand("sweep", "branch and verdict table over an h range");
  auto* example = app.add_subcommand("example", "reference example 1, 2 or 3");

  for (auto* cmd : {branches, region, classify, simulate, perturb, lattice, sweep_cmd, example}) {
    add_common(cmd, common);
  }
  bool headways = false;
  lattice->add_flag("--headways", headways, "write headways instead of positions");
  int example_id = 0;
  example->add_option("n", example_id, "example number")
      ->required()
      ->check(CLI::IsMember({1, 2, 3}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const fs::path out = common.out;
  try {
    if (example->parsed()) {
      std::optional<Tolerance> tol;
      if (common.tol_rel || common.tol_abs) {
        Tolerance t;
        if (common.tol_rel) t.rel = *common.tol_rel;
        if (common.tol_abs) t.abs = *common.tol_abs;
        tol = t;
      }
      const Bundle b = run_example(example_id, out, tol, common.dt);
      std::cout << b.summary["verdict"].dump(2) << '\n';
      report(b);
      return 0;
    }

    const ExperimentConfig cfg = resolve(common);

    if (branches->parsed()) {
      const OvfSpec spec = make_vq(cfg.ovf.v_max, cfg.ovf.d_s);
      auto r = cfg.branches;
      if (r.lo == 0.0 && r.hi == 0.0) {
        const double hs = critical_pair(spec).h_star;
        r.lo = 0.5 * hs;
        r.hi = 10.0 * hs;
      }
      auto os = open_file(out, "branches.csv");
      write_branches_csv(os, spec, r.lo, r.hi, r.samples);
      report(out / "branches.csv");
    } else if (region->parsed()) {
      {
        auto os = open_file(out, "region_boundary.csv");
        write_region_boundary_csv(os, cfg.region.boundary_samples);
      }
      {
        auto os = open_file(out, "region_grid.csv");
        write_region_grid_csv(os, cfg.region.alpha_samples, cfg.region.beta_samples);
      }
      report(out / "region_boundary.csv");
      report(out / "region_grid.csv");
    } else if (classify->parsed()) {
      const WaveSetup s = select_wave(cfg);
      nlohmann::json j = {{"wave", point_json(s)},
                          {"verdict", verdict_json(classify_wavefront(s.spec, s.point))}};
      std::cout << j.dump(2) << '\n';
    } else if (simulate->parsed()) {
      report(run_simulation(cfg, out, "simulation"));
    } else if (perturb->parsed()) {
      const Bundle b = run_perturbed(cfg, out);
      std::cout << b.summary["deviation"].dump(2) << '\n';
      report(b);
    } else if (lattice->parsed()) {
      const LatticeResult r = run_lattice(cfg);
      {
        auto os = open_file(out, "lattice.csv");
        write_lattice_csv(os, r.ansatz, headways);
      }
      report(out / "lattice.csv");
      nlohmann::json j = {{"ansatz_residual", r.residual},
                          {"ordering_violations", r.ansatz.ordering_violations}};
      if (r.direct) {
        auto os = open_file(out, "lattice_direct.csv");
        write_lattice_csv(os, *r.direct, headways);
        report(out / "lattice_direct.csv");
        j["max_deviation"] = r.max_deviation;
      }
      std::cout << j.dump(2) << '\n';
    } else if (sweep_cmd->parsed()) {
      const OvfSpec spec = make_vq(cfg.ovf.v_max, cfg.ovf.d_s);
      auto r = cfg.sweep;
      if (r.lo == 0.0 && r.hi == 0.0) {
        const double hs = critical_pair(spec).h_star;
        r.lo = hs + 0.01;
        r.hi = std::min(2.0, hs + 1.0);
      }
      const SweepResult res = sweep(spec, r.lo, r.hi, r.samples);
      {
        auto os = open_file(out, "sweep.csv");
        write_sweep_csv(os, res);
      }
      report(out / "sweep.csv");
      nlohmann::json j = {{"region_flips", res.region_flips}};
      if (res.crossing) {
        j["h_H"] = res.crossing->h;
        j["omega"] = res.crossing->omega;
        j["residual"] = res.crossing->residual;
      }
      std::cout << j.dump(2) << '\n';
    }
    return 0;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
