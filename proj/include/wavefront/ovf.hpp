#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wavefront {

/// An optimal velocity function V together with its first two derivatives.
///
/// Custom functions are accepted as plain callables; the declared metadata
/// (maximum velocity, safety distance, inflection point of V) is trusted by
/// the rest of the library and can be validated with ovf_axiom_check().
struct OvfSpec {
  using Fn = std::function<double(double)>;

  double v_max = 0.0;
  double d_s = 0.0;
  /// Location of the global maximum of V'.
  double b = 0.0;
  Fn eval;
  Fn deriv;
  Fn deriv2;

  double operator()(double s) const { return eval(s); }
};

/// V(s) = v_max (s-d_s)^2 / (1 + (s-d_s)^2) for s >= d_s, zero below.
/// deriv2 at s = d_s is the right limit 2 v_max.
OvfSpec make_vq(double v_max, double d_s);

enum class OvfAxiom {
  Monotone,          // OVF 1: non-negative, nondecreasing
  Bounded,           // OVF 2: below v_max, tends to v_max
  SafetyDistance,    // OVF 3: zero up to d_s, positive after
  DerivativeShape,   // OVF 4: V' increasing on (d_s,b), decreasing after
  DerivativeMismatch // deriv disagrees with finite differences of eval
};

struct AxiomViolation {
  OvfAxiom axiom;
  double s;
  std::string message;
};

std::string to_string(OvfAxiom axiom);

/// Checks the OVF axioms on a sorted probe grid. An empty result means all
/// axioms hold on the grid.
std::vector<AxiomViolation> ovf_axiom_check(const OvfSpec& spec,
                                            std::span<const double> grid);

/// Convenience: n uniformly spaced points on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace wavefront
