#include "wavefront/rk23.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavefront/errors.hpp"

namespace wavefront {

void DenseOutput::push_knot(double t, std::span<const double> y,
                            std::span<const double> f) {
  t_.push_back(t);
  y_.insert(y_.end(), y.begin(), y.end());
  f_.insert(f_.end(), f.begin(), f.end());
}

std::size_t DenseOutput::locate(double t) const {
  if (t_.empty() || !(t >= t_.front() && t <= t_.back())) {
    std::ostringstream os;
    os.precision(17);
    os << "dense output: t=" << t << " outside ["
       << (t_.empty() ? 0.0 : t_.front()) << ", " << (t_.empty() ? 0.0 : t_.back())
       << "]";
    throw DomainError(os.str());
  }
  if (t_.size() == 1) return 0;
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - t_.begin());
  if (k == 0) k = 1;
  if (k >= t_.size()) k = t_.size() - 1;
  return k - 1;
}

void DenseOutput::eval(double t, std::span<double> y) const {
  const std::size_t k = locate(t);
  if (t_.size() == 1 || t == t_[k]) {
    std::copy_n(y_.begin() + static_cast<std::ptrdiff_t>(k * dim_), dim_, y.begin());
    return;
  }
  const double dt = t_[k + 1] - t_[k];
  const double th = (t - t_[k]) / dt;
  const double om = 1.0 - th;
  const double h00 = (1.0 + 2.0 * th) * om * om;
  const double h10 = th * om * om;
  const double h01 = th * th * (3.0 - 2.0 * th);
  const double h11 = th * th * (th - 1.0);
  const double* y0 = &y_[k * dim_];
  const double* y1 = y0 + dim_;
  const double* f0 = &f_[k * dim_];
  const double* f1 = f0 + dim_;
  for (std::size_t i = 0; i < dim_; ++i) {
    y[i] = h00 * y0[i] + h01 * y1[i] + dt * (h10 * f0[i] + h11 * f1[i]);
  }
}

double DenseOutput::eval(double t, std::size_t component) const {
  std::vector<double> y(dim_);
  eval(t, y);
  return y[component];
}

namespace {

// Bogacki-Shampine coefficients.
constexpr double kA21 = 0.5;
constexpr double kA32 = 0.75;
constexpr double kB1 = 2.0 / 9.0, kB2 = 1.0 / 3.0, kB3 = 4.0 / 9.0;
constexpr double kE1 = -5.0 / 72.0, kE2 = 1.0 / 12.0, kE3 = 1.0 / 9.0, kE4 = -1.0 / 8.0;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

SolverStats integrate_bs23(const OdeRhs& rhs, double t0, std::span<const double> y0,
                           double t_end, const StepOptions& opts, DenseOutput& out) {
  const std::size_t n = y0.size();
  const double span = t_end - t0;
  const double rel = opts.tol.rel;
  const double abs = opts.tol.abs;

  SolverStats stats;
  std::vector<double> y(y0.begin(), y0.end()), ynew(n), tmp(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n);

  rhs(t0, y, k1);
  ++stats.rhs_evals;
  if (!all_finite(y) || !all_finite(k1)) {
    throw NumericalError("domain error: non-finite initial state or right-hand side");
  }
  out.push_knot(t0, y, k1);

  std::vector<double> breaks;
  for (double b : opts.breakpoints) {
    if (b > t0 && b < t_end) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.push_back(t_end);
  std::size_t next_break = 0;

  // Initial step from the ratio of scaled state and slope norms.
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = abs + rel * std::abs(y[i]);
    d0 = std::max(d0, std::abs(y[i]) / sc);
    d1 = std::max(d1, std::abs(k1[i]) / sc);
  }
  double dt = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  dt = std::min({dt, opts.max_step, span});
  dt = std::max(dt, 1e-10 * span);

  const double dt_min = 1e-12 * span;
  double t = t0;
  bool rejected_last = false;

  while (t < t_end) {
    const double bp = breaks[next_break];
    bool hits_break = false;
    if (t + dt >= bp || (t + 1.01 * dt >= bp && bp - t <= opts.max_step)) {
      dt = bp - t;
      hits_break = true;
    }
    if (dt < dt_min) {
      std::ostringstream os;
      os.precision(17);
      os << "step size underflow at t=" << t << " (dt=" << dt << ")";
      throw NumericalError(os.str());
    }

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * kA21 * k1[i];
    rhs(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * kA32 * k2[i];
    rhs(t + 0.75 * dt, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) {
      ynew[i] = y[i] + dt * (kB1 * k1[i] + kB2 * k2[i] + kB3 * k3[i]);
    }
    const double t_new = hits_break ? bp : t + dt;
    rhs(t_new, ynew, k4);
    stats.rhs_evals += 3;

    if (!all_finite(ynew) || !all_finite(k4)) {
      throw NumericalError("domain error: non-finite value in right-hand side");
    }

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = dt * (kE1 * k1[i] + kE2 * k2[i] + kE3 * k3[i] + kE4 * k4[i]);
      const double sc = abs + rel * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(e) / sc);
    }

    if (err <= 1.0) {
      t = t_new;
      y.swap(ynew);
      k1.swap(k4);
      out.push_knot(t, y, k1);
      ++stats.steps;
      if (hits_break) ++next_break;
      double fac = err == 0.0 ? 5.0 : 0.9 * std::cbrt(1.0 / err);
      fac = std::clamp(fac, 0.2, rejected_last ? 1.0 : 5.0);
      dt = std::min(dt * fac, opts.max_step);
      rejected_last = false;
    } else {
      ++stats.rejected;
      const double fac = std::max(0.2, 0.9 * std::cbrt(1.0 / err));
      dt *= fac;
      rejected_last = true;
    }
  }
  return stats;
}

}  // namespace wavefront
