#pragma once

#include <memory>
#include <vector>

namespace wavefront {

/// Position and velocity of the scalar profile at one instant.
struct State {
  double z = 0.0;
  double dz = 0.0;
};

/// Initial history w_0 : [-1, 0] -> (z, z').
///
/// Either closed form (affine position, constant velocity) or sampled with
/// monotone cubic interpolation of each component.
class Segment {
 public:
  /// s -> (position, 0).
  static Segment constant(double position);

  /// s -> (offset + slope*s, slope + velocity_offset). A nonzero velocity
  /// offset injects a small inconsistency between the two components.
  static Segment affine(double offset, double slope, double velocity_offset = 0.0);

  /// History of the quasi-stationary solution z(t) = -c t + d.
  static Segment quasi_stationary(double c, double d) { return affine(d, -c); }

  /// Samples on a strictly increasing grid covering exactly [-1, 0]
  /// (at least four points).
  static Segment sampled(std::vector<double> s, std::vector<double> z,
                         std::vector<double> dz);

  /// Throws DomainError outside [-1, 0].
  State operator()(double s) const;

  /// The segment plus d times the constant direction (1, 0).
  Segment shifted(double d) const;

  /// sup over [-1,0] of the Euclidean norm, sampled at `per_unit` points.
  double sup_norm(int per_unit = 64) const;

  bool is_closed_form() const { return sampled_ == nullptr; }

 private:
  struct Sampled;

  double offset_ = 0.0;
  double slope_ = 0.0;
  double velocity_offset_ = 0.0;
  double shift_ = 0.0;
  std::shared_ptr<const Sampled> sampled_;
};

}  // namespace wavefront
