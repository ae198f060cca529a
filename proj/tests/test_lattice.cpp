#include <cmath>
#include <memory>

#include "doctest.h"
#include "oracles.hpp"
#include "wavefront/errors.hpp"
#include "wavefront/lattice.hpp"

using namespace wavefront;

namespace {

const OvfSpec kV = make_vq(100.0, 0.0);
const double kH = 0.2;
const double kC = oracle::quad_small(kH, 100.0);

std::shared_ptr<const Trajectory> profile(const Segment& phi, double t_end) {
  return std::make_shared<const Trajectory>(integrate(kV, kH, phi, t_end));
}

}  // namespace

TEST_CASE("quasi-stationary ansatz is the explicit lattice") {
  const double d = 0.75;
  const auto run =
      wavefront_to_lattice(profile(Segment::quasi_stationary(kC, d), 60.0), -60, -50,
                           time_grid(0.0, 10.0, 51));
  for (int j = -60; j <= -50; ++j) {
    for (std::size_t k = 0; k < run.times.size(); ++k) {
      const double t = run.times[k];
      CHECK(std::abs(run.x(j, k) - (kC / kH * t + kC * j + d)) < 1e-9);
      CHECK(std::abs(run.v(j, k) - kC / kH) < 1e-9);
      if (j < -50) CHECK(std::abs(run.headway(j, k) - kC) < 1e-9);
    }
  }
  CHECK(run.ordered());
  CHECK(ansatz_residual(run, kV) < 1e-8);
}

TEST_CASE("index shift equals a time shift by h") {
  const auto p = profile(Segment::affine(0.0, -(kC - 0.005)), 80.0);
  const std::vector<double> times{1.0, 1.0 + kH, 3.3, 3.3 + kH};
  const auto run = wavefront_to_lattice(p, -60, -50, times);
  for (int j = -60; j < -50; ++j) {
    CHECK(run.x(j, 1) == doctest::Approx(run.x(j + 1, 0)).epsilon(1e-12));
    CHECK(run.x(j, 3) == doctest::Approx(run.x(j + 1, 2)).epsilon(1e-12));
  }
  CHECK(ansatz_residual(run, kV) < 1e-4);
}

TEST_CASE("ansatz outside the profile's domain") {
  const auto p = profile(Segment::quasi_stationary(kC, 0.0), 5.0);
  CHECK_THROWS_AS(wavefront_to_lattice(p, -60, -50, time_grid(0.0, 1.0, 5)), DomainError);
}

TEST_CASE("increasing profile violates ordering") {
  const auto p = profile(Segment::affine(0.0, 0.3), 20.0);
  const auto run = wavefront_to_lattice(p, -15, -10, time_grid(0.0, 1.0, 5));
  CHECK_FALSE(run.ordered());
}

TEST_CASE("followers on the ansatz stay on it") {
  const double t_end = 20.0;
  const auto times = time_grid(0.0, t_end, 101);
  const LeaderMotion leader = [](double t) { return CarState{kC / kH * t, kC / kH}; };
  std::vector<CarState> init;
  for (int j = -5; j < 0; ++j) init.push_back({kC * j, kC / kH});
  const auto run = simulate_followers(kV, leader, init, t_end, {}, times, 0);
  CHECK(run.j_min == -5);
  CHECK(run.j_max == 0);
  for (int j = -5; j < 0; ++j) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      CHECK(std::abs(run.x(j, k) - (kC / kH * times[k] + kC * j)) < 1e-6);
    }
  }
}

TEST_CASE("stopped leader") {
  const OvfSpec v = make_vq(1.0, 0.5);
  const LeaderMotion leader = [](double) { return CarState{0.0, 0.0}; };
  const auto times = time_grid(0.0, 30.0, 31);
  const auto run = simulate_followers(v, leader, {{-0.5, 0.2}}, 30.0, {}, times);
  CHECK(std::abs(run.v(-1, times.size() - 1)) < 1e-6);
  CHECK(run.x(-1, times.size() - 1) < 0.0);
}

TEST_CASE("constant-speed leader with follower at the equilibrium headway") {
  const double vm = 1.0, ds = 0.5, speed = 0.3;
  const double s_star = ds + std::sqrt(speed / (vm - speed));
  const OvfSpec v = make_vq(vm, ds);
  CHECK(v(s_star) == doctest::Approx(speed).epsilon(1e-14));
  const LeaderMotion leader = [&](double t) { return CarState{speed * t, speed}; };
  const auto times = time_grid(0.0, 20.0, 41);
  const auto run = simulate_followers(v, leader, {{-s_star, speed}}, 20.0, {}, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(std::abs(run.v(-1, k) - speed) < 1e-6);
    CHECK(std::abs(run.headway(-1, k) - s_star) < 1e-6);
  }
}

TEST_CASE("unordered initial state") {
  const LeaderMotion leader = [](double) { return CarState{0.0, 0.0}; };
  CHECK_THROWS(simulate_followers(kV, leader, {{1.0, 0.0}}, 1.0, {}, {0.0, 1.0}));
}
