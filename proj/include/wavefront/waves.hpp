#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavefront/ovf.hpp"

namespace wavefront {

enum class Branch { First, Second, Degenerate };

std::string to_string(Branch b);

/// |h V'(c) - 1| at or below this marks the tangent (degenerate) case.
inline constexpr double kDegeneracyTol = 1e-8;

/// A constant-speed wavefront: h V(c) = c with c > 0.
struct WavefrontPoint {
  double h = 0.0;
  double c = 0.0;
  /// h V'(c); > 1 on the first branch, < 1 on the second.
  double slope_product = 0.0;
  Branch branch = Branch::First;
};

/// Builds a point from (h, c), classifying the branch from h V'(c).
WavefrontPoint make_point(const OvfSpec& spec, double h, double c);

/// The unique tangent solution of h V(c) = c, h V'(c) = 1, and the upper end
/// of the first branch's h-domain.
struct CriticalPair {
  double c_star = 0.0;
  double h_star = 0.0;
  /// +infinity when c / V(c) is unbounded as c decreases to d_s.
  double h_hat = 0.0;
};

/// All c > 0 with h V(c) = c, ascending (0, 1 or 2 entries).
std::vector<WavefrontPoint> find_constant_speeds(const OvfSpec& spec, double h);

CriticalPair critical_pair(const OvfSpec& spec);

/// c_1(h) in (d_s, c*) or c_2(h) in (c*, inf). Returns nullopt when h lies
/// beyond h_hat on the first branch. Throws DomainError for h <= h*.
std::optional<WavefrontPoint> branch_eval(const OvfSpec& spec, double h, Branch which);
std::optional<WavefrontPoint> branch_eval(const OvfSpec& spec, const CriticalPair& cp,
                                          double h, Branch which);

/// dc/dh = V(c) / (1 - h V'(c)). Throws NumericalError at a degenerate point.
double branch_derivative(const OvfSpec& spec, const WavefrontPoint& point);

}  // namespace wavefront
