#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "wavefront/errors.hpp"
#include "wavefront/stability.hpp"
#include "wavefront/waves.hpp"

using namespace wavefront;

namespace {

constexpr double kPi = std::numbers::pi;

// Real root of chi in (lo, hi) by bisection on the real axis.
double real_root(double alpha, double beta, double lo, double hi) {
  return oracle::bisect([&](double x) { return oracle::chi(alpha, beta, x).real(); }, lo, hi);
}

bool has_unstable_root(const std::vector<Complex>& roots) {
  for (Complex z : roots) {
    if (z.real() > 1e-8) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("characteristic function") {
  CHECK(std::abs(char_eval({-0.7, 1.3}, 0.0)) == 0.0);
  CHECK(std::abs(char_eval({-0.2, 0.0}, 0.2)) < 1e-16);
  const Complex l{0.3, 1.1};
  CHECK(std::abs(char_eval({-1.5, 2.8}, l) - oracle::chi(-1.5, 2.8, l)) < 1e-14);
  CHECK(std::abs(char_deflated({-1.5, 2.8}, l) * l - oracle::chi(-1.5, 2.8, l)) < 1e-13);
  CHECK(std::abs(char_deflated({-1.5, 2.8}, 0.0) - Complex(1.3, 0.0)) < 1e-15);
  const double eps = 1e-6;
  const Complex fd = (char_eval({-1.5, 2.8}, l + eps) - char_eval({-1.5, 2.8}, l - eps)) /
                     (2.0 * eps);
  CHECK(std::abs(char_deriv({-1.5, 2.8}, l) - fd) < 1e-7);
}

TEST_CASE("stability parameters of the examples") {
  const OvfSpec v = make_vq(100.0, 0.0);
  const auto p = stability_params(v, *branch_eval(v, 0.2, Branch::First));
  CHECK(p.alpha == -0.2);
  CHECK(p.beta == doctest::Approx(oracle::branch1_beta(0.2, 100.0)).epsilon(1e-12));
  CHECK(std::abs(p.beta - 0.39899) < 1e-4);

  const OvfSpec w = make_vq(2.841, 0.0);
  const auto q = stability_params(w, *branch_eval(w, 1.5, Branch::First));
  CHECK(q.alpha == -1.5);
  CHECK(std::abs(q.beta - 2.8245) < 1e-3);

  const OvfSpec s = make_vq(1.0, 0.5);
  CHECK(stability_params(s, make_point(s, 0.7, 0.2)).beta == 0.0);
}

TEST_CASE("C1 boundary") {
  CHECK(std::abs(*c1_boundary_beta(0.0) - kPi * kPi / 2.0) < 1e-9);
  CHECK(std::abs(*c1_boundary_beta(-2.0) - 2.0) < 1e-9);
  CHECK_FALSE(c1_boundary_beta(-2.5).has_value());
  CHECK_FALSE(c1_boundary_beta(0.5).has_value());
  for (double a : linspace(-1.999, -0.001, 200)) {
    const auto pt = *c1_boundary(a);
    CHECK(std::abs(oracle::c1_alpha(pt.nu) - a) < 1e-10);
    CHECK(std::abs(oracle::c1_beta(pt.nu) - pt.beta) < 1e-10);
  }
  const double nu = oracle::c1_nu(-1.5);
  CHECK(*c1_boundary_beta(-1.5) == doctest::Approx(oracle::c1_beta(nu)).epsilon(1e-12));
}

TEST_CASE("region classification") {
  CHECK(region_classify({-0.2, 0.39899}) == Region::InsideS);
  CHECK(region_classify({-1.5, 2.8245}) == Region::OutsideS);
  CHECK(region_classify({-0.2, 0.0010026}) == Region::OutsideS);
  CHECK(region_classify({-1.0, 1.0}) == Region::BoundaryOther);
  CHECK(region_classify({-1.5, *c1_boundary_beta(-1.5)}) == Region::BoundaryC1);
  CHECK(region_classify({-3.0, 3.0}) == Region::OutsideS);
  CHECK(to_string(Region::InsideS) == "inside_S");
  CHECK_THROWS(region_classify({0.5, 1.0}));
}

TEST_CASE("roots for the second-branch parameters") {
  const double beta = 0.04 * oracle::vq_prime(100.0, 0.0, oracle::quad_large(0.2, 100.0));
  const double ref = real_root(-0.2, beta, 0.1, 0.3);
  const auto roots = rightmost_roots({-0.2, beta}, Rect{-0.05, 1.0, -5.0, 5.0});
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] - Complex(ref, 0.0)) < 1e-10);
  CHECK(std::abs(char_eval({-0.2, beta}, roots[0])) < 1e-10);
  CHECK(std::abs(roots[1]) < 1e-12);
  CHECK(winding_count({-0.2, beta}, Rect{-0.05, 1.0, -5.0, 5.0}, false) == 2);
}

TEST_CASE("stable parameters have no roots in the right half plane") {
  const auto roots = rightmost_roots({-0.2, 0.398997}, Rect{1e-6, 5.0, -20.0, 20.0});
  CHECK(roots.empty());
}

TEST_CASE("pure imaginary pair on C1") {
  const auto pt = *c1_boundary(-1.5);
  const StabilityParams p{-1.5, pt.beta};
  const auto roots = rightmost_roots(p, Rect{-0.3, 2.0, -10.0, 10.0});
  int on_axis = 0;
  for (Complex z : roots) {
    if (std::abs(z.real()) < 1e-7 && std::abs(std::abs(z.imag()) - pt.nu) < 1e-7) ++on_axis;
  }
  CHECK(on_axis == 2);
  CHECK(std::abs(char_eval(p, Complex(0.0, pt.nu))) < 1e-8);
}

TEST_CASE("roots come in conjugate pairs") {
  const auto roots = rightmost_roots({-1.5, 2.8245});
  for (Complex z : roots) {
    bool found = false;
    for (Complex w : roots) found = found || std::abs(w - std::conj(z)) < 1e-9;
    CHECK(found);
  }
  CHECK(roots.front().real() == doctest::Approx(0.0768).epsilon(1e-3));
}

TEST_CASE("classifier agrees with the root finder on a grid") {
  int disagreements = 0;
  for (double a : linspace(-2.93, -0.07, 20)) {
    for (double b : linspace(0.11, 5.97, 20)) {
      const StabilityParams p{a, b};
      const bool inside = region_classify(p) == Region::InsideS;
      if (inside == has_unstable_root(rightmost_roots(p))) ++disagreements;
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("wavefront verdicts") {
  const OvfSpec v = make_vq(100.0, 0.0);
  CHECK(classify_wavefront(v, *branch_eval(v, 0.2, Branch::First)).classification ==
        Classification::Stable);
  CHECK(classify_wavefront(v, *branch_eval(v, 0.2, Branch::Second)).classification ==
        Classification::Unstable);
  const OvfSpec w = make_vq(2.841, 0.0);
  const auto e3 = classify_wavefront(w, *branch_eval(w, 1.5, Branch::First));
  CHECK(e3.classification == Classification::Unstable);
  CHECK(e3.region == Region::OutsideS);
}

TEST_CASE("hopf crossing") {
  const OvfSpec w = make_vq(2.841, 0.0);
  const CriticalPair cp = critical_pair(w);
  const double lo = cp.h_star + 0.01;

  // exactly one sign change of the C1 distance on a fine grid
  int flips = 0;
  double prev = c1_signed_distance(w, cp, lo);
  for (double h : linspace(lo, 1.5, 200)) {
    const double d = c1_signed_distance(w, cp, h);
    if ((d < 0.0) != (prev < 0.0)) ++flips;
    prev = d;
  }
  CHECK(flips == 1);

  const HopfCrossing x = hopf_crossing(w, lo, 1.5);
  const double ref = oracle::bisect(
      [](double h) {
        return oracle::branch1_beta(h, 2.841) - oracle::c1_beta(oracle::c1_nu(-h));
      },
      lo, 1.5);
  CHECK(x.h == doctest::Approx(ref).epsilon(1e-9));
  CHECK(x.omega == doctest::Approx(oracle::c1_nu(-ref)).epsilon(1e-8));
  CHECK(std::abs(oracle::chi(x.params.alpha, x.params.beta, {0.0, x.omega})) < 1e-8);

  const auto below = classify_wavefront(w, *branch_eval(w, x.h - 1e-3, Branch::First));
  const auto above = classify_wavefront(w, *branch_eval(w, x.h + 1e-3, Branch::First));
  CHECK(below.classification == Classification::Stable);
  CHECK(above.classification == Classification::Unstable);

  CHECK_THROWS_AS(hopf_crossing(w, lo, lo + 0.05), DomainError);
}

TEST_CASE("hopf bracket for the first example parameters") {
  const OvfSpec v = make_vq(100.0, 0.0);
  try {
    const HopfCrossing x = hopf_crossing(v, 0.021, 0.2);
    CHECK(x.residual < 1e-8);
  } catch (const DomainError&) {
    CHECK(region_classify({-0.2, oracle::branch1_beta(0.2, 100.0)}) == Region::InsideS);
  }
}
