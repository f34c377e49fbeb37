#include <random>

#include "doctest.h"
#include "wavecontrol/timegrid.hpp"

using namespace wavecontrol;

namespace {

// f^n = (n tau)^2 on every dof, the classic exactness probe for second
// differences.
SpaceTimeField quadratic_field(const TimeGrid& grid, int n_dofs) {
  SpaceTimeField f = make_field(grid, 0, grid.N, n_dofs);
  for (int n = 0; n <= grid.N; ++n) {
    const double t = grid.time(n);
    f.at(n).setConstant(t * t);
  }
  return f;
}

}  // namespace

TEST_SUITE("timegrid") {
  TEST_CASE("make_time_grid fixes tau = T/N and validates its inputs") {
    const TimeGrid g = make_time_grid(1.0, 4);
    CHECK(g.tau == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.time(3) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(make_time_grid(0.0, 4), config_error);
    CHECK_THROWS_AS(make_time_grid(-1.0, 8), config_error);
    CHECK_THROWS_AS(make_time_grid(1.0, 3), config_error);
  }

  TEST_CASE("steps_for_ratio lands on tau ~= rho h with a floor of 4 steps") {
    CHECK(steps_for_ratio(3.0, 1.0, 0.125) == 24);
    CHECK(steps_for_ratio(2.0, 1.0, 0.25) == 8);
    CHECK(steps_for_ratio(2.0, 0.5, 0.25) == 16);
    // Large steps hit the minimum.
    CHECK(steps_for_ratio(0.1, 1.0, 0.125) == 4);
    CHECK_THROWS_AS(steps_for_ratio(0.0, 1.0, 0.1), config_error);
    CHECK_THROWS_AS(steps_for_ratio(1.0, -1.0, 0.1), config_error);
    CHECK_THROWS_AS(steps_for_ratio(1.0, 1.0, 0.0), config_error);
  }

  TEST_CASE("fields refuse levels outside their stored range") {
    const TimeGrid g = make_time_grid(1.0, 4);
    SpaceTimeField f = make_field(g, 2, 4, 3);
    CHECK(f.n_levels() == 3);
    CHECK(f.n_dofs() == 3);
    f.at(2).setConstant(1.0);
    CHECK(f.at(2)(0) == 1.0);
    CHECK_THROWS_AS(f.at(1), shape_error);
    CHECK_THROWS_AS(f.at(5), shape_error);
    CHECK_THROWS_AS(make_field(g, 3, 2, 1), shape_error);
    CHECK_THROWS_AS(make_field(g, -1, 4, 1), shape_error);
    CHECK_THROWS_AS(make_field(g, 0, 4, 0), shape_error);
  }

  TEST_CASE("first differences follow the declared orientation and signs") {
    const TimeGrid g = make_time_grid(2.0, 4);  // tau = 0.5
    const SpaceTimeField f = quadratic_field(g, 2);
    // ((1.5)^2 - (1.0)^2) / 0.5 = 2.5, derivative of t^2 sampled backward.
    CHECK(backward_diff(f, 3)(0) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(backward_diff(f, 3)(1) == doctest::Approx(2.5).epsilon(1e-14));
    // forward_diff(f, n) = (f^n - f^{n+1}) / tau, note the sign.
    CHECK(forward_diff(f, 1)(0) == doctest::Approx((0.25 - 1.0) / 0.5).epsilon(1e-14));
    CHECK_THROWS_AS(backward_diff(f, 0), shape_error);
    CHECK_THROWS_AS(forward_diff(f, 4), shape_error);
  }

  TEST_CASE("second differences are exact on quadratics in time") {
    const TimeGrid g = make_time_grid(2.0, 4);
    const SpaceTimeField f = quadratic_field(g, 3);
    for (int n = 2; n <= g.N; ++n) {
      CHECK(backward_diff2(f, n)(0) == doctest::Approx(2.0).epsilon(1e-12));
    }
    for (int n = 0; n <= g.N - 2; ++n) {
      CHECK(forward_diff2(f, n)(2) == doctest::Approx(2.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(backward_diff2(f, 1), shape_error);
    CHECK_THROWS_AS(forward_diff2(f, 3), shape_error);
  }

  TEST_CASE("forward second differences mirror backward ones in reversed time") {
    const TimeGrid g = make_time_grid(1.0, 6);
    std::mt19937 rng(2024u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpaceTimeField f = make_field(g, 0, g.N, 4);
    SpaceTimeField r = make_field(g, 0, g.N, 4);
    for (int n = 0; n <= g.N; ++n) {
      for (int i = 0; i < 4; ++i) f.at(n)(i) = gauss(rng);
    }
    for (int n = 0; n <= g.N; ++n) r.at(n) = f.at(g.N - n);
    for (int n = 0; n <= g.N - 2; ++n) {
      const Eigen::VectorXd a = forward_diff2(f, n);
      const Eigen::VectorXd b = backward_diff2(r, g.N - n);
      CHECK((a - b).lpNorm<Eigen::Infinity>() == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}
