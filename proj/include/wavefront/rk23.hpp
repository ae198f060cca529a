#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace wavefront {

struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;
};

struct SolverStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

/// Piecewise cubic Hermite interpolant over the accepted step mesh.
/// Knots carry the state and its time derivative.
class DenseOutput {
 public:
  explicit DenseOutput(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  bool empty() const { return t_.empty(); }
  double t_begin() const { return t_.front(); }
  double t_end() const { return t_.back(); }
  const std::vector<double>& mesh() const { return t_; }

  void push_knot(double t, std::span<const double> y, std::span<const double> f);

  /// Throws DomainError outside [t_begin, t_end].
  void eval(double t, std::span<double> y) const;
  double eval(double t, std::size_t component) const;

 private:
  std::size_t locate(double t) const;

  std::size_t dim_;
  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> f_;
};

/// y' = rhs(t, y). The callback writes dy.
using OdeRhs =
    std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct StepOptions {
  Tolerance tol;
  double max_step = std::numeric_limits<double>::infinity();
  /// Times the mesh must hit exactly (sorted; values outside (t0, t_end) ignored).
  std::vector<double> breakpoints;
};

/// Bogacki-Shampine 3(2) pair with FSAL and error-per-step control. Accepted
/// knots are appended to `out` as they are produced, so the callback may read
/// already-completed history through `out` (method of steps).
///
/// Throws NumericalError on step-size underflow or non-finite values.
SolverStats integrate_bs23(const OdeRhs& rhs, double t0, std::span<const double> y0,
                           double t_end, const StepOptions& opts, DenseOutput& out);

}  // namespace wavefront
