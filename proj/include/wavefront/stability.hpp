#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "wavefront/ovf.hpp"
#include "wavefront/waves.hpp"

namespace wavefront {

using Complex = std::complex<double>;

/// Coefficients of chi(lambda) = lambda^2 + alpha lambda + beta (1 - e^{-lambda}).
/// For a wavefront: alpha = -h, beta = h^2 V'(c).
struct StabilityParams {
  double alpha = 0.0;
  double beta = 0.0;
};

enum class Region { InsideS, BoundaryC1, BoundaryOther, OutsideS };
enum class Classification { Stable, Unstable, MarginalHopf, Undetermined };

std::string to_string(Region r);
std::string to_string(Classification c);

/// Axis-aligned search window in the complex plane.
struct Rect {
  double re_min = -0.5;
  double re_max = 5.0;
  double im_min = -30.0;
  double im_max = 30.0;

  bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min &&
           z.imag() <= im_max;
  }
};

/// Window used by the classifier cross-check.
inline constexpr Rect kDefaultSearch{-0.5, 5.0, -30.0, 30.0};

/// Tolerance in beta for sitting on a boundary curve.
inline constexpr double kBoundaryTol = 1e-9;

struct StabilityVerdict {
  StabilityParams params;
  Region region = Region::OutsideS;
  std::vector<Complex> rightmost_roots;
  Classification classification = Classification::Undetermined;
};

Complex char_eval(const StabilityParams& p, Complex lambda);
Complex char_deriv(const StabilityParams& p, Complex lambda);

/// chi(lambda) / lambda, continued by alpha + beta at lambda = 0.
Complex char_deflated(const StabilityParams& p, Complex lambda);

StabilityParams stability_params(const OvfSpec& spec, const WavefrontPoint& point);

/// A point of the curve C1, parametrized by nu in (0, pi):
///   alpha = -nu / tan(nu/2),  beta = nu^2 / (tan^2(nu/2) (1 + cos nu)).
/// On C1 the characteristic function has the roots +-i nu.
struct C1Point {
  double nu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Direct evaluation of the parametrization.
C1Point c1_point(double nu);

/// The point of C1 above alpha; the endpoints alpha = -2 and alpha = 0 give
/// the limits nu -> 0 (beta = 2) and nu -> pi (beta = pi^2/2). nullopt
/// outside [-2, 0].
std::optional<C1Point> c1_boundary(double alpha);
std::optional<double> c1_boundary_beta(double alpha);

/// Throws DomainError for alpha > 0 or beta < 0.
Region region_classify(const StabilityParams& p);

/// Number of zeros of chi (deflated: of chi/lambda) enclosed by the window,
/// by tracking the argument along the boundary. Throws NumericalError when
/// a zero lies on the boundary.
int winding_count(const StabilityParams& p, const Rect& rect, bool deflated);

/// All roots of chi in the window, rightmost first, at most `max_roots`
/// (a conjugate partner is never cut off). The zero root is included when
/// the window contains the origin. Throws NumericalError when the located
/// roots do not account for the winding count.
std::vector<Complex> rightmost_roots(const StabilityParams& p, const Rect& rect = kDefaultSearch,
                                     std::size_t max_roots = 64);

/// Region-based verdict for a wavefront, cross-checked against the roots.
/// Throws ConsistencyError when they disagree.
StabilityVerdict classify_wavefront(const OvfSpec& spec, const WavefrontPoint& point);

/// beta(h) - beta_C1(alpha(h)) along the first branch, alpha(h) = -h.
/// Negative inside S (above G1), positive beyond C1.
double c1_signed_distance(const OvfSpec& spec, const CriticalPair& cp, double h);

struct HopfCrossing {
  double h = 0.0;
  double omega = 0.0;
  double c = 0.0;
  StabilityParams params;
  /// |chi(i omega)| at params.
  double residual = 0.0;
};

/// Locates the crossing of the first branch's (alpha, beta) curve through C1
/// in (h_lo, h_hi) by bisection. Throws DomainError when there is no sign
/// flip of c1_signed_distance on the bracket.
HopfCrossing hopf_crossing(const OvfSpec& spec, double h_lo, double h_hi);

}  // namespace wavefront
