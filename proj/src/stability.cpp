#include "wavefront/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wavefront/errors.hpp"

namespace wavefront {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// q(z) = (1 - e^{-z}) / z and its derivative, with series near zero.
Complex q_val(Complex z) {
  if (std::abs(z) < 1e-2) {
    // sum_k (-1)^k z^k / (k+1)!
    Complex term = 1.0, sum = 0.0;
    for (int k = 0; k < 10; ++k) {
      sum += term;
      term *= -z / static_cast<double>(k + 2);
    }
    return sum;
  }
  return (1.0 - std::exp(-z)) / z;
}

Complex q_deriv(Complex z) {
  if (std::abs(z) < 1e-2) {
    // sum_{k>=1} (-1)^k k z^{k-1} / (k+1)!
    Complex sum = 0.0;
    Complex zpow = 1.0;
    double fact = 2.0;  // (k+1)!
    for (int k = 1; k < 10; ++k) {
      sum += (k % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(k) * zpow / fact;
      zpow *= z;
      fact *= static_cast<double>(k + 2);
    }
    return sum;
  }
  return (std::exp(-z) * (z + 1.0) - 1.0) / (z * z);
}

Complex deflated_deriv(const StabilityParams& p, Complex z) {
  return 1.0 + p.beta * q_deriv(z);
}

struct BoundaryHit {};

// Accumulated argument change of f along the segment a -> b.
template <class F>
double arg_change(const F& f, Complex a, Complex fa, Complex b, Complex fb, int depth) {
  const Complex m = 0.5 * (a + b);
  const Complex fm = f(m);
  if (std::abs(fm) == 0.0) throw BoundaryHit{};
  const double whole = std::arg(fb / fa);
  const double left = std::arg(fm / fa);
  const double right = std::arg(fb / fm);
  if (depth >= 40) return left + right;
  if (std::abs(whole) < 0.3 && std::abs(left + right - whole) < 1e-9) {
    return left + right;
  }
  return arg_change(f, a, fa, m, fm, depth + 1) + arg_change(f, m, fm, b, fb, depth + 1);
}

template <class F>
int count_zeros(const F& f, const Rect& r) {
  const Complex corners[5] = {{r.re_min, r.im_min},
                              {r.re_max, r.im_min},
                              {r.re_max, r.im_max},
                              {r.re_min, r.im_max},
                              {r.re_min, r.im_min}};
  double total = 0.0;
  const double scale = std::max(r.re_max - r.re_min, r.im_max - r.im_min);
  for (int e = 0; e < 4; ++e) {
    const Complex a = corners[e];
    const Complex b = corners[e + 1];
    const int pieces =
        std::max(16, static_cast<int>(std::ceil(8.0 * std::abs(b - a))));
    Complex za = a;
    Complex fa = f(za);
    for (int k = 1; k <= pieces; ++k) {
      const Complex zb = a + (b - a) * (static_cast<double>(k) / pieces);
      const Complex fb = f(zb);
      // A value this small on the contour means a zero sits on it.
      if (std::abs(fa) < 1e-12 * (1.0 + scale * scale) ||
          std::abs(fb) < 1e-12 * (1.0 + scale * scale)) {
        throw BoundaryHit{};
      }
      total += arg_change(f, za, fa, zb, fb, 0);
      za = zb;
      fa = fb;
    }
  }
  const double turns = total / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-3) {
    throw NumericalError("winding number not integral: " + fmt(turns));
  }
  return static_cast<int>(rounded);
}

struct RootSearch {
  const StabilityParams& p;
  std::vector<Complex> roots;

  Complex f(Complex z) const { return char_deflated(p, z); }

  int count(const Rect& r) const {
    return count_zeros([this](Complex z) { return f(z); }, r);
  }

  std::optional<Complex> newton(Complex z, const Rect& cell) const {
    const double size = std::max(cell.re_max - cell.re_min, cell.im_max - cell.im_min);
    for (int it = 0; it < 60; ++it) {
      const Complex fz = f(z);
      const Complex dz = deflated_deriv(p, z);
      if (std::abs(dz) == 0.0) return std::nullopt;
      const Complex step = fz / dz;
      z -= step;
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    const double margin = 1e-9 * (1.0 + size);
    Rect grown{cell.re_min - margin, cell.re_max + margin, cell.im_min - margin,
               cell.im_max + margin};
    if (!grown.contains(z)) return std::nullopt;
    if (std::abs(char_eval(p, z)) > 1e-10) return std::nullopt;
    return z;
  }

  void solve(const Rect& cell, int n, int depth) {
    if (n <= 0) return;
    const Complex center{0.5 * (cell.re_min + cell.re_max),
                         0.5 * (cell.im_min + cell.im_max)};
    const double w = cell.re_max - cell.re_min;
    const double hgt = cell.im_max - cell.im_min;
    if (n == 1) {
      if (auto z = newton(center, cell)) {
        roots.push_back(*z);
        return;
      }
    }
    if (std::max(w, hgt) < 1e-9 || depth > 80) {
      // Cluster of n roots (a multiple root) too tight to separate.
      Complex z = center;
      if (auto polished = newton(center, cell)) z = *polished;
      for (int k = 0; k < n; ++k) roots.push_back(z);
      return;
    }
    for (double frac : {0.5, 0.4937, 0.5117, 0.4711}) {
      Rect a = cell, b = cell;
      if (w >= hgt) {
        const double cut = cell.re_min + frac * w;
        a.re_max = cut;
        b.re_min = cut;
      } else {
        const double cut = cell.im_min + frac * hgt;
        a.im_max = cut;
        b.im_min = cut;
      }
      int na = 0, nb = 0;
      try {
        na = count(a);
        nb = count(b);
      } catch (const BoundaryHit&) {
        continue;
      }
      if (na + nb != n) continue;
      solve(a, na, depth + 1);
      solve(b, nb, depth + 1);
      return;
    }
    throw NumericalError("rightmost_roots: could not split cell consistently");
  }
};

}  // namespace

std::string to_string(Region r) {
  switch (r) {
    case Region::InsideS: return "inside_S";
    case Region::BoundaryC1: return "boundary_C1";
    case Region::BoundaryOther: return "boundary_other";
    case Region::OutsideS: return "outside_S";
  }
  return "unknown";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Stable: return "stable";
    case Classification::Unstable: return "unstable";
    case Classification::MarginalHopf: return "marginal_hopf";
    case Classification::Undetermined: return "undetermined";
  }
  return "unknown";
}

Complex char_eval(const StabilityParams& p, Complex lambda) {
  return lambda * lambda + p.alpha * lambda + p.beta * (1.0 - std::exp(-lambda));
}

Complex char_deriv(const StabilityParams& p, Complex lambda) {
  return 2.0 * lambda + p.alpha + p.beta * std::exp(-lambda);
}

Complex char_deflated(const StabilityParams& p, Complex lambda) {
  return lambda + p.alpha + p.beta * q_val(lambda);
}

StabilityParams stability_params(const OvfSpec& spec, const WavefrontPoint& point) {
  return {-point.h, point.h * point.h * spec.deriv(point.c)};
}

C1Point c1_point(double nu) {
  const double t = std::tan(0.5 * nu);
  return {nu, -nu / t, nu * nu / (t * t * (1.0 + std::cos(nu)))};
}

std::optional<C1Point> c1_boundary(double alpha) {
  if (!(alpha >= -2.0 && alpha <= 0.0)) return std::nullopt;
  if (alpha == -2.0) return C1Point{0.0, -2.0, 2.0};
  if (alpha == 0.0) return C1Point{kPi, 0.0, kPi * kPi / 2.0};
  // -nu / tan(nu/2) increases from -2 to 0 on (0, pi).
  double lo = 0.0, hi = kPi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double a = -mid / std::tan(0.5 * mid);
    if (a < alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double nu = 0.5 * (lo + hi);
  // 1 + cos(nu) = 2 cos^2(nu/2), so beta = nu^2 / (2 sin^2(nu/2)); this
  // form stays accurate as nu approaches pi.
  const double s = std::sin(0.5 * nu);
  return C1Point{nu, alpha, nu * nu / (2.0 * s * s)};
}

std::optional<double> c1_boundary_beta(double alpha) {
  if (auto pt = c1_boundary(alpha)) return pt->beta;
  return std::nullopt;
}

Region region_classify(const StabilityParams& p) {
  if (p.alpha > 0.0 || p.beta < 0.0 || !std::isfinite(p.alpha) || !std::isfinite(p.beta)) {
    throw DomainError("region_classify: need alpha <= 0 and beta >= 0 (got " +
                      fmt(p.alpha) + ", " + fmt(p.beta) + ")");
  }
  const double tol = kBoundaryTol;
  const double a = p.alpha;
  const double b = p.beta;
  const double top = kPi * kPi / 2.0;

  if (a >= -tol) {
    // On or next to G0; the upper corner belongs to C1.
    if (std::abs(b - top) <= tol) return Region::BoundaryC1;
    return b < top ? Region::BoundaryOther : Region::OutsideS;
  }
  if (std::abs(a + 2.0) <= tol) {
    return std::abs(b - 2.0) <= tol ? Region::BoundaryOther : Region::OutsideS;
  }
  if (a < -2.0) return Region::OutsideS;

  const double beta_c1 = *c1_boundary_beta(a);
  if (std::abs(b - beta_c1) <= tol) return Region::BoundaryC1;
  if (std::abs(b + a) <= tol) return Region::BoundaryOther;
  if (b > -a && b < beta_c1) return Region::InsideS;
  return Region::OutsideS;
}

int winding_count(const StabilityParams& p, const Rect& rect, bool deflated) {
  try {
    if (deflated) {
      return count_zeros([&](Complex z) { return char_deflated(p, z); }, rect);
    }
    return count_zeros([&](Complex z) { return char_eval(p, z); }, rect);
  } catch (const BoundaryHit&) {
    throw NumericalError("winding_count: a root lies on the window boundary");
  }
}

std::vector<Complex> rightmost_roots(const StabilityParams& p, const Rect& rect,
                                     std::size_t max_roots) {
  if (!(rect.re_min > -20.0) || !(rect.re_max > rect.re_min) ||
      !(rect.im_max > rect.im_min)) {
    throw ParameterError("rightmost_roots: invalid search window");
  }
  RootSearch search{p, {}};
  Rect window = rect;
  int total = -1;
  for (int attempt = 0; attempt < 6 && total < 0; ++attempt) {
    try {
      total = search.count(window);
    } catch (const BoundaryHit&) {
      // Root on the contour: grow the window slightly and retry.
      const double grow = 1e-7 * std::pow(10.0, attempt) *
                          (1.0 + std::max(window.re_max - window.re_min,
                                          window.im_max - window.im_min));
      window = {window.re_min - grow, window.re_max + grow, window.im_min - grow,
                window.im_max + grow};
    }
  }
  if (total < 0) throw NumericalError("rightmost_roots: contour keeps hitting a root");

  search.solve(window, total, 0);
  if (static_cast<int>(search.roots.size()) != total) {
    throw NumericalError("rightmost_roots: found " + std::to_string(search.roots.size()) +
                         " roots, winding count says " + std::to_string(total));
  }
  std::vector<Complex> roots = std::move(search.roots);
  if (rect.contains(Complex{0.0, 0.0})) roots.push_back(0.0);

  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  if (roots.size() > max_roots) {
    std::size_t keep = max_roots;
    if (keep > 0) {
      const Complex last = roots[keep - 1];
      const Complex next = roots[keep];
      if (last.imag() != 0.0 && std::abs(next - std::conj(last)) <= 1e-8 * (1.0 + std::abs(last))) {
        ++keep;
      }
    }
    roots.resize(keep);
  }
  return roots;
}

StabilityVerdict classify_wavefront(const OvfSpec& spec, const WavefrontPoint& point) {
  StabilityVerdict v;
  v.params = stability_params(spec, point);
  v.region = region_classify(v.params);
  v.rightmost_roots = rightmost_roots(v.params, kDefaultSearch);

  if (point.branch == Branch::Degenerate) {
    v.classification = Classification::Undetermined;
    return v;
  }
  if (point.branch == Branch::Second) {
    v.classification = Classification::Unstable;
  } else {
    switch (v.region) {
      case Region::InsideS: v.classification = Classification::Stable; break;
      case Region::OutsideS: v.classification = Classification::Unstable; break;
      case Region::BoundaryC1: v.classification = Classification::MarginalHopf; break;
      case Region::BoundaryOther: v.classification = Classification::Undetermined; break;
    }
  }

  const bool has_unstable_root =
      std::any_of(v.rightmost_roots.begin(), v.rightmost_roots.end(),
                  [](Complex z) { return z.real() > 1e-8; });
  const bool says_unstable = v.classification == Classification::Unstable;
  const bool says_stable = v.classification == Classification::Stable;
  if ((says_unstable && !has_unstable_root) || (says_stable && has_unstable_root)) {
    throw ConsistencyError("classify_wavefront: region says " + to_string(v.region) +
                           " but the root finder " +
                           (has_unstable_root ? "found" : "did not find") +
                           " a root with positive real part (alpha=" + fmt(v.params.alpha) +
                           ", beta=" + fmt(v.params.beta) + ")");
  }
  return v;
}

double c1_signed_distance(const OvfSpec& spec, const CriticalPair& cp, double h) {
  if (!(h > 0.0 && h <= 2.0)) {
    throw DomainError("c1_signed_distance: need 0 < h <= 2 so that alpha = -h meets C1");
  }
  const auto point = branch_eval(spec, cp, h, Branch::First);
  if (!point) throw DomainError("c1_signed_distance: first branch undefined at h=" + fmt(h));
  const StabilityParams p = stability_params(spec, *point);
  return p.beta - *c1_boundary_beta(p.alpha);
}

HopfCrossing hopf_crossing(const OvfSpec& spec, double h_lo, double h_hi) {
  if (!(h_lo < h_hi)) throw DomainError("hopf_crossing: empty bracket");
  const CriticalPair cp = critical_pair(spec);
  if (!(h_lo > cp.h_star)) {
    throw DomainError("hopf_crossing: bracket must lie above h_star = " + fmt(cp.h_star));
  }
  auto s = [&](double h) { return c1_signed_distance(spec, cp, h); };
  double lo = h_lo, hi = h_hi;
  const double s_lo = s(lo);
  const double s_hi = s(hi);
  if ((s_lo < 0.0) == (s_hi < 0.0) || s_lo == 0.0 || s_hi == 0.0) {
    throw DomainError("hopf_crossing: bracket error, no region flip on [" + fmt(h_lo) +
                      ", " + fmt(h_hi) + "]");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((s(mid) < 0.0) == (s_lo < 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  HopfCrossing out;
  out.h = 0.5 * (lo + hi);
  const auto point = branch_eval(spec, cp, out.h, Branch::First);
  out.c = point->c;
  out.params = stability_params(spec, *point);
  out.omega = c1_boundary(out.params.alpha)->nu;
  out.residual = std::abs(char_eval(out.params, Complex{0.0, out.omega}));
  if (out.residual > 1e-8) {
    throw NumericalError("hopf_crossing: |chi(i omega)| = " + fmt(out.residual));
  }
  return out;
}

}  // namespace wavefront
