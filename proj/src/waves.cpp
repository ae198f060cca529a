#include "wavefront/waves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wavefront/errors.hpp"

namespace wavefront {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection on a sign change of f over [lo, hi]; f(lo) and f(hi) must have
// opposite signs (or one of them be zero).
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-15) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

double residual(const OvfSpec& spec, double h, double c) { return h * spec.eval(c) - c; }

// Newton polish of h V(c) = c, kept only when it reduces the residual.
double polish(const OvfSpec& spec, double h, double c) {
  for (int it = 0; it < 3; ++it) {
    const double g = residual(spec, h, c);
    const double dg = h * spec.deriv(c) - 1.0;
    if (std::abs(dg) < 1e-6) break;
    const double next = c - g / dg;
    if (!(next > spec.d_s) || std::abs(residual(spec, h, next)) >= std::abs(g)) break;
    c = next;
  }
  return c;
}

// Root of h V'(c) = 1 on (b, inf) where V' decreases; requires h V'(b) > 1.
double tangency_candidate(const OvfSpec& spec, double h) {
  double lo = spec.b;
  double hi = spec.b + std::max(1.0, spec.b - spec.d_s);
  for (int it = 0; it < 200 && h * spec.deriv(hi) > 1.0; ++it) {
    lo = hi;
    hi = spec.b + 2.0 * (hi - spec.b);
  }
  return bisect([&](double c) { return h * spec.deriv(c) - 1.0; }, lo, hi);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(Branch b) {
  switch (b) {
    case Branch::First: return "branch1";
    case Branch::Second: return "branch2";
    case Branch::Degenerate: return "degenerate";
  }
  return "unknown";
}

WavefrontPoint make_point(const OvfSpec& spec, double h, double c) {
  WavefrontPoint p;
  p.h = h;
  p.c = c;
  p.slope_product = h * spec.deriv(c);
  if (std::abs(p.slope_product - 1.0) <= kDegeneracyTol) {
    p.branch = Branch::Degenerate;
  } else {
    p.branch = p.slope_product > 1.0 ? Branch::First : Branch::Second;
  }
  return p;
}

std::vector<WavefrontPoint> find_constant_speeds(const OvfSpec& spec, double h) {
  if (!(h > 0.0)) throw ParameterError("find_constant_speeds: h must be positive");
  std::vector<WavefrontPoint> out;

  // h V'(c) <= 1 everywhere: h V(c) - c is nonincreasing from -d_s <= 0.
  if (!(h * spec.deriv(spec.b) > 1.0)) return out;

  const double c_m = tangency_candidate(spec, h);
  const double g_m = residual(spec, h, c_m);
  if (std::abs(g_m) <= 1e-10 * std::max(1.0, c_m)) {
    out.push_back(make_point(spec, h, c_m));
    out.back().branch = Branch::Degenerate;
    return out;
  }
  if (g_m < 0.0) return out;

  // Geometric grid over (d_s, h v_max] plus the tangency candidate and b.
  const double c_upper = h * spec.v_max;
  std::vector<double> grid;
  constexpr int kPoints = 400;
  const double width = c_upper - spec.d_s;
  for (int k = 0; k <= kPoints; ++k) {
    const double frac = std::pow(10.0, -14.0 * (1.0 - static_cast<double>(k) / kPoints));
    grid.push_back(spec.d_s + width * frac);
  }
  grid.push_back(c_m);
  grid.push_back(spec.b);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto g = [&](double c) { return residual(spec, h, c); };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i], b = grid[i + 1];
    const double ga = g(a), gb = g(b);
    if (gb == 0.0 && b > spec.d_s && b < c_upper) {
      out.push_back(make_point(spec, h, b));
      continue;
    }
    if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) {
      double c = bisect(g, a, b, 1e-12);
      c = polish(spec, h, c);
      out.push_back(make_point(spec, h, c));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const WavefrontPoint& x, const WavefrontPoint& y) { return x.c < y.c; });
  if (out.size() == 2 && out[0].branch == Branch::Degenerate &&
      out[1].branch == Branch::Degenerate) {
    out = {make_point(spec, h, c_m)};
    out[0].branch = Branch::Degenerate;
  }
  return out;
}

CriticalPair critical_pair(const OvfSpec& spec) {
  // g(c) = c V'(c) / V(c) crosses 1 exactly once on (d_s, inf).
  auto g = [&](double c) { return c * spec.deriv(c) / spec.eval(c) - 1.0; };
  double lo = spec.d_s + 0.5 * (spec.b - spec.d_s);
  double hi = std::max(2.0 * spec.b, spec.b + 1.0);
  for (int it = 0; it < 200 && g(hi) > 0.0; ++it) hi *= 2.0;
  if (!(g(lo) > 0.0) || !(g(hi) < 0.0)) {
    throw NumericalError("critical_pair: could not bracket c V'(c) / V(c) = 1");
  }
  CriticalPair cp;
  cp.c_star = bisect(g, lo, hi, 1e-16);
  cp.h_star = cp.c_star / spec.eval(cp.c_star);

  const double res1 = std::abs(cp.h_star * spec.eval(cp.c_star) - cp.c_star);
  const double res2 = std::abs(cp.h_star * spec.deriv(cp.c_star) - 1.0);
  if (res1 > 1e-10 || res2 > kDegeneracyTol) {
    throw NumericalError("critical_pair: residuals too large (" + fmt(res1) + ", " +
                         fmt(res2) + ")");
  }

  // h_hat: limit of c / V(c) as c decreases to d_s.
  std::vector<double> probe;
  for (int k = 2; k <= 10; ++k) {
    const double c = spec.d_s + std::pow(10.0, -k);
    const double v = spec.eval(c);
    probe.push_back(v > 0.0 ? c / v : kInf);
  }
  bool increasing = true;
  for (std::size_t i = 1; i < probe.size(); ++i) {
    if (!(probe[i] > probe[i - 1])) increasing = false;
  }
  const double last_ratio = probe.back() / probe[probe.size() - 2];
  const double peak = *std::max_element(probe.begin(), probe.end());
  if (peak > 1e12 || (increasing && last_ratio > 1.5)) {
    cp.h_hat = kInf;
  } else {
    cp.h_hat = probe.back();
  }
  return cp;
}

std::optional<WavefrontPoint> branch_eval(const OvfSpec& spec, const CriticalPair& cp,
                                          double h, Branch which) {
  if (which == Branch::Degenerate) {
    throw ParameterError("branch_eval: choose branch1 or branch2");
  }
  if (!(h > cp.h_star)) {
    throw DomainError("branch_eval: " + to_string(which) + " requires h > h_star = " +
                      fmt(cp.h_star) + " (got " + fmt(h) + ")");
  }
  // h V(c) - c is negative just above d_s on the first branch's domain,
  // positive at c*, and negative again beyond c_2(h).
  auto g = [&](double x) { return residual(spec, h, x); };
  double c;
  if (which == Branch::First) {
    if (!(h < cp.h_hat)) return std::nullopt;
    double hi = cp.c_star;
    double lo = hi;
    double gap = cp.c_star - spec.d_s;
    bool bracketed = false;
    for (int it = 0; it < 1100 && gap > 0.0; ++it) {
      gap *= 0.5;
      const double probe = spec.d_s + gap;
      if (g(probe) < 0.0) {
        lo = probe;
        bracketed = true;
        break;
      }
      hi = probe;
    }
    if (!bracketed) return std::nullopt;
    c = bisect(g, lo, hi);
  } else {
    double hi = std::max(2.0 * cp.c_star, cp.c_star + 1.0);
    for (int it = 0; it < 200 && g(hi) > 0.0; ++it) hi *= 2.0;
    c = bisect(g, cp.c_star, hi);
  }
  c = polish(spec, h, c);
  WavefrontPoint p = make_point(spec, h, c);
  if (p.branch == Branch::Degenerate) return p;
  if (p.branch != which) p.branch = which;
  return p;
}

std::optional<WavefrontPoint> branch_eval(const OvfSpec& spec, double h, Branch which) {
  return branch_eval(spec, critical_pair(spec), h, which);
}

double branch_derivative(const OvfSpec& spec, const WavefrontPoint& point) {
  const double denom = 1.0 - point.h * spec.deriv(point.c);
  if (std::abs(denom) <= kDegeneracyTol) {
    throw NumericalError("branch_derivative: singular at the degenerate point (h V'(c) = 1)");
  }
  return spec.eval(point.c) / denom;
}

}  // namespace wavefront
