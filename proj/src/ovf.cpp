#include "wavefront/ovf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wavefront/errors.hpp"

namespace wavefront {

OvfSpec make_vq(double v_max, double d_s) {
  if (!(v_max > 0.0) || !std::isfinite(v_max)) {
    throw ParameterError("make_vq: v_max must be positive and finite");
  }
  if (!(d_s >= 0.0) || !std::isfinite(d_s)) {
    throw ParameterError("make_vq: d_s must be non-negative and finite");
  }
  OvfSpec spec;
  spec.v_max = v_max;
  spec.d_s = d_s;
  spec.b = d_s + 1.0 / std::sqrt(3.0);
  spec.eval = [v_max, d_s](double s) {
    if (s <= d_s) return 0.0;
    const double u2 = (s - d_s) * (s - d_s);
    return v_max * u2 / (1.0 + u2);
  };
  spec.deriv = [v_max, d_s](double s) {
    if (s <= d_s) return 0.0;
    const double u = s - d_s;
    const double q = 1.0 + u * u;
    return 2.0 * v_max * u / (q * q);
  };
  spec.deriv2 = [v_max, d_s](double s) {
    if (s < d_s) return 0.0;
    const double u2 = (s - d_s) * (s - d_s);
    const double q = 1.0 + u2;
    return 2.0 * v_max * (1.0 - 3.0 * u2) / (q * q * q);
  };
  return spec;
}

std::string to_string(OvfAxiom axiom) {
  switch (axiom) {
    case OvfAxiom::Monotone: return "OVF1";
    case OvfAxiom::Bounded: return "OVF2";
    case OvfAxiom::SafetyDistance: return "OVF3";
    case OvfAxiom::DerivativeShape: return "OVF4";
    case OvfAxiom::DerivativeMismatch: return "derivative";
  }
  return "unknown";
}

namespace {

std::string describe(const char* what, double s, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at s=" << s << " (value " << value << ")";
  return os.str();
}

}  // namespace

std::vector<AxiomViolation> ovf_axiom_check(const OvfSpec& spec,
                                            std::span<const double> grid) {
  std::vector<AxiomViolation> out;
  if (grid.empty()) return out;

  // One report per axiom family keeps the output readable.
  bool seen[5] = {false, false, false, false, false};
  auto report = [&](OvfAxiom a, double s, std::string msg) {
    auto& flag = seen[static_cast<int>(a)];
    if (flag) return;
    flag = true;
    out.push_back({a, s, std::move(msg)});
  };

  const double value_tol = 1e-12 * std::max(1.0, spec.v_max);
  double prev_v = -std::numeric_limits<double>::infinity();
  double prev_dv = 0.0;
  double prev_s = 0.0;
  bool have_prev = false;

  for (double s : grid) {
    const double v = spec.eval(s);
    const double dv = spec.deriv(s);

    if (v < 0.0) report(OvfAxiom::Monotone, s, describe("negative value", s, v));
    if (v < prev_v - value_tol) {
      report(OvfAxiom::Monotone, s, describe("decreasing", s, v));
    }
    if (v >= spec.v_max) {
      report(OvfAxiom::Bounded, s, describe("reaches v_max", s, v));
    }
    if (s <= spec.d_s && v != 0.0) {
      report(OvfAxiom::SafetyDistance, s,
             describe("nonzero below safety distance", s, v));
    }
    if (s > spec.d_s && !(v > 0.0)) {
      report(OvfAxiom::SafetyDistance, s,
             describe("not positive above safety distance", s, v));
    }

    if (have_prev && prev_s > spec.d_s) {
      if (s <= spec.b && !(dv > prev_dv)) {
        report(OvfAxiom::DerivativeShape, s,
               describe("V' not increasing below b", s, dv));
      }
      if (prev_s >= spec.b && !(dv < prev_dv)) {
        report(OvfAxiom::DerivativeShape, s,
               describe("V' not decreasing above b", s, dv));
      }
    }

    // Central differences, skipping stencils that straddle d_s.
    const double step = std::max(1e-6, 1e-6 * std::abs(s));
    if (std::abs(s - spec.d_s) > step) {
      const double fd = (spec.eval(s + step) - spec.eval(s - step)) / (2.0 * step);
      const double tol = 1e-6 * std::max(std::abs(dv), 1e-3 * spec.v_max);
      if (std::abs(fd - dv) > tol) {
        report(OvfAxiom::DerivativeMismatch, s,
               describe("deriv differs from finite difference", s, fd - dv));
      }
    }

    prev_v = v;
    prev_dv = dv;
    prev_s = s;
    have_prev = true;
  }

  // Limit at infinity.
  const double far = std::max(1e8, 1e6 * std::abs(grid.back()));
  const double v_far = spec.eval(far);
  if (std::abs(spec.v_max - v_far) > 1e-3 * spec.v_max) {
    report(OvfAxiom::Bounded, far, describe("does not approach v_max", far, v_far));
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace wavefront
