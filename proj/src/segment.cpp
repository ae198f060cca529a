#include "wavefront/segment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

// Boost 1.74's pchip.hpp calls unqualified isnan.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "wavefront/errors.hpp"

namespace wavefront {

using boost::math::interpolators::pchip;

struct Segment::Sampled {
  pchip<std::vector<double>> z;
  pchip<std::vector<double>> dz;
};

Segment Segment::constant(double position) { return affine(position, 0.0); }

Segment Segment::affine(double offset, double slope, double velocity_offset) {
  if (!std::isfinite(offset) || !std::isfinite(slope) ||
      !std::isfinite(velocity_offset)) {
    throw ParameterError("Segment::affine: non-finite coefficient");
  }
  Segment seg;
  seg.offset_ = offset;
  seg.slope_ = slope;
  seg.velocity_offset_ = velocity_offset;
  return seg;
}

Segment Segment::sampled(std::vector<double> s, std::vector<double> z,
                         std::vector<double> dz) {
  if (s.size() < 4 || z.size() != s.size() || dz.size() != s.size()) {
    throw ParameterError("Segment::sampled: need >= 4 samples of equal length");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) {
      throw ParameterError("Segment::sampled: grid must be strictly increasing");
    }
  }
  if (s.front() != -1.0 || s.back() != 0.0) {
    throw ParameterError("Segment::sampled: grid must span exactly [-1, 0]");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(z[i]) || !std::isfinite(dz[i])) {
      throw ParameterError("Segment::sampled: non-finite sample");
    }
  }
  std::vector<double> s2 = s;
  Segment seg;
  seg.sampled_ = std::make_shared<const Sampled>(
      Sampled{pchip<std::vector<double>>(std::move(s), std::move(z)),
              pchip<std::vector<double>>(std::move(s2), std::move(dz))});
  return seg;
}

State Segment::operator()(double s) const {
  if (!(s >= -1.0 && s <= 0.0)) {
    throw DomainError("Segment: evaluation at s=" + std::to_string(s) +
                      " outside [-1, 0]");
  }
  if (sampled_) {
    return {sampled_->z(s) + shift_, sampled_->dz(s)};
  }
  return {offset_ + slope_ * s + shift_, slope_ + velocity_offset_};
}

Segment Segment::shifted(double d) const {
  Segment out = *this;
  out.shift_ += d;
  return out;
}

double Segment::sup_norm(int per_unit) const {
  double best = 0.0;
  for (int k = 0; k <= per_unit; ++k) {
    const double s = -1.0 + static_cast<double>(k) / per_unit;
    const State w = (*this)(std::min(s, 0.0));
    best = std::max(best, std::hypot(w.z, w.dz));
  }
  return best;
}

}  // namespace wavefront
