#include "wavefront/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "wavefront/errors.hpp"

namespace wavefront {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string> kKnownKeys = {
    "ovf.kind",          "ovf.v_max",        "ovf.d_s",
    "wave.h",            "wave.branch",      "wave.c",
    "initial.kind",      "initial.offset",   "initial.slope",
    "initial.file",      "perturbation.slope_offset", "perturbation.amplitude",
    "solver.t_end",      "solver.tol_rel",   "solver.tol_abs",
    "output.dt",         "output.stats_from",
    "sweep.h_min",       "sweep.h_max",      "sweep.samples",
    "branches.h_min",    "branches.h_max",   "branches.samples",
    "lattice.j_min",     "lattice.j_max",    "lattice.t_min",
    "lattice.t_max",     "lattice.samples",  "lattice.followers",
    "region.alpha_samples", "region.beta_samples", "region.boundary_samples",
};

template <class T>
void read(const pt::ptree& tree, const char* key, T& into) {
  if (auto v = tree.get_optional<std::string>(key)) {
    std::istringstream is(*v);
    T value{};
    is >> value;
    if (is.fail() || !(is >> std::ws).eof()) {
      throw ParameterError(std::string("config: bad value for ") + key + ": '" + *v + "'");
    }
    into = value;
  }
}

InitialKind parse_kind(const std::string& s) {
  if (s == "quasi_stationary") return InitialKind::QuasiStationary;
  if (s == "constant") return InitialKind::Constant;
  if (s == "affine") return InitialKind::Affine;
  if (s == "sampled") return InitialKind::Sampled;
  throw ParameterError("config: unknown initial.kind '" + s + "'");
}

}  // namespace

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::QuasiStationary: return "quasi_stationary";
    case InitialKind::Constant: return "constant";
    case InitialKind::Affine: return "affine";
    case InitialKind::Sampled: return "sampled";
  }
  return "unknown";
}

ExperimentConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream is{std::string(text)};
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ParameterError("config: key '" + section + "' outside a section");
    }
    for (const auto& [key, value] : body) {
      (void)value;
      if (!kKnownKeys.count(section + "." + key)) {
        throw ParameterError("config: unknown key '" + section + "." + key + "'");
      }
    }
  }

  ExperimentConfig cfg;
  read(tree, "ovf.kind", cfg.ovf.kind);
  read(tree, "ovf.v_max", cfg.ovf.v_max);
  read(tree, "ovf.d_s", cfg.ovf.d_s);
  read(tree, "wave.h", cfg.h);
  read(tree, "wave.branch", cfg.branch);
  if (tree.get_optional<std::string>("wave.c")) {
    double c = 0.0;
    read(tree, "wave.c", c);
    cfg.c = c;
  }
  if (auto k = tree.get_optional<std::string>("initial.kind")) {
    cfg.initial.kind = parse_kind(*k);
  }
  read(tree, "initial.offset", cfg.initial.offset);
  read(tree, "initial.slope", cfg.initial.slope);
  read(tree, "initial.file", cfg.initial.file);
  read(tree, "perturbation.slope_offset", cfg.perturbation.slope_offset);
  read(tree, "perturbation.amplitude", cfg.perturbation.amplitude);
  read(tree, "solver.t_end", cfg.t_end);
  read(tree, "solver.tol_rel", cfg.tol.rel);
  read(tree, "solver.tol_abs", cfg.tol.abs);
  read(tree, "output.dt", cfg.output_dt);
  read(tree, "output.stats_from", cfg.stats_from);
  read(tree, "sweep.h_min", cfg.sweep.lo);
  read(tree, "sweep.h_max", cfg.sweep.hi);
  read(tree, "sweep.samples", cfg.sweep.samples);
  read(tree, "branches.h_min", cfg.branches.lo);
  read(tree, "branches.h_max", cfg.branches.hi);
  read(tree, "branches.samples", cfg.branches.samples);
  read(tree, "lattice.j_min", cfg.lattice.j_min);
  read(tree, "lattice.j_max", cfg.lattice.j_max);
  read(tree, "lattice.t_min", cfg.lattice.t_min);
  read(tree, "lattice.t_max", cfg.lattice.t_max);
  read(tree, "lattice.samples", cfg.lattice.samples);
  read(tree, "lattice.followers", cfg.lattice.followers);
  read(tree, "region.alpha_samples", cfg.region.alpha_samples);
  read(tree, "region.beta_samples", cfg.region.beta_samples);
  read(tree, "region.boundary_samples", cfg.region.boundary_samples);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& cfg) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (cfg.ovf.kind != "vq") throw ParameterError("config: only ovf.kind = vq is supported");
  if (!(cfg.ovf.v_max > 0.0) || !finite(cfg.ovf.v_max)) {
    throw ParameterError("config: ovf.v_max must be positive");
  }
  if (!(cfg.ovf.d_s >= 0.0) || !finite(cfg.ovf.d_s)) {
    throw ParameterError("config: ovf.d_s must be non-negative");
  }
  if (!(cfg.h > 0.0) || !finite(cfg.h)) throw ParameterError("config: wave.h must be positive");
  if (cfg.branch != 1 && cfg.branch != 2) throw ParameterError("config: wave.branch must be 1 or 2");
  if (cfg.c && !(*cfg.c > 0.0)) throw ParameterError("config: wave.c must be positive");
  if (!(cfg.t_end > 0.0) || !finite(cfg.t_end)) {
    throw ParameterError("config: solver.t_end must be positive");
  }
  if (!(cfg.tol.rel > 0.0) || !(cfg.tol.abs > 0.0)) {
    throw ParameterError("config: tolerances must be positive");
  }
  if (!(cfg.output_dt > 0.0)) throw ParameterError("config: output.dt must be positive");
  for (double x : {cfg.initial.offset, cfg.initial.slope, cfg.perturbation.slope_offset,
                   cfg.perturbation.amplitude}) {
    if (!finite(x)) throw ParameterError("config: slope descriptions must be finite");
  }
  if (cfg.initial.kind == InitialKind::Sampled && cfg.initial.file.empty()) {
    throw ParameterError("config: initial.kind = sampled needs initial.file");
  }
}

}  // namespace wavefront
