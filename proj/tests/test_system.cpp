#include <cmath>
#include <random>

#include "doctest.h"
#include "wavecontrol/analysis.hpp"
#include "wavecontrol/cutoff.hpp"
#include "wavecontrol/data.hpp"
#include "wavecontrol/system.hpp"

using namespace wavecontrol;

namespace {

struct TinyInstance {
  Mesh mesh;
  FemSpace space;
  TimeGrid grid;
  Vector chi;
};

// Interval with 3 interior dofs, 4 steps: small enough for dense probes.
TinyInstance tiny() {
  TinyInstance t;
  DomainSpec d;
  d.kind = DomainKind::unit_interval;
  d.target_h = 0.25;
  t.mesh = build_mesh(d);
  t.space = make_space(t.mesh);
  t.grid = make_time_grid(2.0, 8);
  CutoffSpec c;
  c.r = 0.3;
  c.delta = 0.1;
  t.chi = discretize_cutoff(build_cutoff(d, c), t.mesh);
  return t;
}

Vector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

}  // namespace

TEST_SUITE("system") {
  TEST_CASE("dof layout places the four blocks with their natural level ranges") {
    DofLayout lay;
    lay.N = 8;
    lay.Nh = 3;
    CHECK(lay.total() == 4 * 8 * 3);
    CHECK(lay.u(0) == 0);
    CHECK(lay.u(8) == 8 * 3);
    CHECK(lay.U(0) == 9 * 3);
    CHECK(lay.z(2) == 18 * 3);
    CHECK(lay.z(8) == 18 * 3 + 6 * 3);
    CHECK(lay.Z(0) == lay.z(8) + 3);
    CHECK(lay.Z(6) == lay.total() - 3);
    CHECK_THROWS_AS(lay.u(9), shape_error);
    CHECK_THROWS_AS(lay.z(1), shape_error);   // z^0 = z^1 structurally absent
    CHECK_THROWS_AS(lay.Z(7), shape_error);   // Z^{N-1} = Z^N absent
  }

  TEST_CASE("the assembled matrix is symmetric with the rhs confined to the data rows") {
    const TinyInstance t = tiny();
    ProblemData data;
    data.g0 = preset_sine(1, 1, 1, 1.0);
    data.g1 = preset_sine(1, 2, 1, 0.5);
    const SaddleSystem sys = assemble_saddle(t.space, t.grid, t.chi, data);
    CHECK(sys.layout.total() == 4 * 8 * 3);
    CHECK(max_asymmetry(sys.A) <= 1e-12);

    // b carries exactly K g0 - (1/tau) M g1 on the u^0 rows and (1/tau) M g1
    // on the u^1 rows; every other row is zero.
    const double tau = sys.grid.tau;
    const Vector b0 = sys.K * sys.g0_h - (1.0 / tau) * (sys.M * sys.g1_h);
    const Vector b1 = (1.0 / tau) * (sys.M * sys.g1_h);
    const int Nh = sys.layout.Nh;
    CHECK((sys.b.segment(sys.layout.u(0), Nh) - b0).lpNorm<Eigen::Infinity>() <= 1e-13);
    CHECK((sys.b.segment(sys.layout.u(1), Nh) - b1).lpNorm<Eigen::Infinity>() <= 1e-13);
    Vector rest = sys.b;
    rest.segment(sys.layout.u(0), 2 * Nh).setZero();
    CHECK(rest.lpNorm<Eigen::Infinity>() == 0.0);
  }

  TEST_CASE("energy forms agree with independent accumulation from M and K") {
    const TinyInstance t = tiny();
    const SaddleSystem sys = assemble_saddle(t.space, t.grid, t.chi, ProblemData{});
    std::mt19937_64 rng(7u);
    const Vector x = random_vector(sys.layout.total(), rng);
    const StateFields f = extract_state(sys, x);
    const double tau = sys.grid.tau;
    const int N = sys.grid.N;

    double G = 0.0;
    for (int n = 2; n <= N; ++n) {
      const Vector d2 = (f.u.at(n) - 2.0 * f.u.at(n - 1) + f.u.at(n - 2)) / (tau * tau);
      G += tau * (d2.dot(sys.M * f.z.at(n)) + f.u.at(n).dot(sys.K * f.z.at(n)));
    }
    CHECK(eval_G(sys, f.u, f.z) == doctest::Approx(G).epsilon(1e-12));

    double Gs = 0.0;
    for (int n = 0; n <= N - 2; ++n) {
      const Vector d2 = (f.U.at(n) - 2.0 * f.U.at(n + 1) + f.U.at(n + 2)) / (tau * tau);
      Gs += tau * (f.Z.at(n).dot(sys.M * d2) + f.Z.at(n).dot(sys.K * f.U.at(n)));
    }
    CHECK(eval_Gstar(sys, f.Z, f.U) == doctest::Approx(Gs).epsilon(1e-12));
  }

  TEST_CASE("frozen values: R of the zero state and J1 of a constant control") {
    const TinyInstance t = tiny();
    // g0 = hat at the middle vertex, passed as nodal coefficients.
    Vector hat = Vector::Zero(t.space.n_dofs);
    hat(1) = 1.0;
    ProblemData data;
    data.g0 = Datum::from_dofs(hat);
    const SaddleSystem sys = assemble_saddle(t.space, t.grid, t.chi, data);

    // With u = 0 the only surviving term is |grad(u^0 - g0)|^2 / 2 = (1/h)
    // for the hat: |hat|_K^2 = 2/h.
    StateFields f = extract_state(sys, Vector::Zero(sys.layout.total()));
    CHECK(eval_R(sys, f.u) == doctest::Approx(1.0 / 0.25).epsilon(1e-13));

    // A time-constant control kills every difference term of J1, leaving
    // (h^2/2) |c|_K^2.
    std::mt19937_64 rng(11u);
    const Vector c = random_vector(t.space.n_dofs, rng);
    for (int n = 0; n <= sys.grid.N; ++n) f.U.at(n) = c;
    const double expected = 0.5 * sys.h * sys.h * c.dot(sys.K * c);
    CHECK(eval_J1(sys, f.U) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("the Lagrangian is the quadratic form of the assembled system") {
    const TinyInstance t = tiny();
    ProblemData data;
    data.g0 = preset_sine(1, 1, 1, 1.0);
    data.g1 = preset_sine(1, 1, 1, -0.5);
    const SaddleSystem sys = assemble_saddle(t.space, t.grid, t.chi, data);
    std::mt19937_64 rng(23u);
    const double J0 = eval_J(sys, Vector::Zero(sys.layout.total()));
    for (int trial = 0; trial < 10; ++trial) {
      const Vector x = random_vector(sys.layout.total(), rng);
      const double quadratic = 0.5 * x.dot(sys.A * x) - sys.b.dot(x);
      const double direct = eval_J(sys, x) - J0;
      CHECK(direct == doctest::Approx(quadratic).epsilon(1e-10));
    }
  }

  TEST_CASE("central differences of the Lagrangian recover A x - b") {
    const TinyInstance t = tiny();
    ProblemData data;
    data.g0 = preset_sine(1, 1, 1, 1.0);
    const SaddleSystem sys = assemble_saddle(t.space, t.grid, t.chi, data);
    std::mt19937_64 rng(31u);
    const double eps = 1e-4;
    for (int trial = 0; trial < 5; ++trial) {
      const Vector x = random_vector(sys.layout.total(), rng);
      const Vector y = random_vector(sys.layout.total(), rng);
      const double fd = (eval_J(sys, x + eps * y) - eval_J(sys, x - eps * y)) / (2.0 * eps);
      const double exact = y.dot(sys.A * x - sys.b);
      CHECK(fd == doctest::Approx(exact).epsilon(1e-8));
    }
  }

  TEST_CASE("pairing with the sign-flipped multipliers reproduces the R norm") {
    // The multiplier couplings cancel in A(x; (u, U, -z, -Z)), leaving exactly
    // the squared R norm of (u, U); this pins every cross block at once.
    const TinyInstance t = tiny();
    const SaddleSystem sys = assemble_saddle(t.space, t.grid, t.chi, ProblemData{});
    std::mt19937_64 rng(43u);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector x = random_vector(sys.layout.total(), rng);
      Vector y = x;
      const int mult = sys.layout.total() - sys.layout.z_offset();
      y.segment(sys.layout.z_offset(), mult) *= -1.0;
      const double paired = y.dot(sys.A * x);
      const NormReport norms = compute_norms(sys, x);
      CHECK(paired == doctest::Approx(norms.R * norms.R).epsilon(1e-11));
    }
  }

  TEST_CASE("state extraction and packing are mutually inverse") {
    const TinyInstance t = tiny();
    const SaddleSystem sys = assemble_saddle(t.space, t.grid, t.chi, ProblemData{});
    std::mt19937_64 rng(53u);
    const Vector x = random_vector(sys.layout.total(), rng);
    const StateFields f = extract_state(sys, x);
    CHECK(f.z.first == 2);
    CHECK(f.Z.last == sys.grid.N - 2);
    const Vector packed = pack_state(sys, f);
    CHECK((packed - x).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK_THROWS_AS(extract_state(sys, Vector::Zero(3)), shape_error);
  }

  TEST_CASE("kernel check: regular with the full functional, singular without it") {
    const TinyInstance t = tiny();
    const SaddleSystem sys = assemble_saddle(t.space, t.grid, t.chi, ProblemData{});
    const KernelCheckResult good = kernel_check(sys);
    CHECK(good.pass);
    CHECK(good.ratio > 1e-10);
    CHECK(good.sigma_min > 0.0);

    // Dropping both energy terms leaves a rank-deficient pure constraint system.
    SaddleScales off;
    off.r_weight = 0.0;
    off.j1_weight = 0.0;
    const SaddleSystem hollow = assemble_saddle(t.space, t.grid, t.chi, ProblemData{}, off);
    const KernelCheckResult bad = kernel_check(hollow);
    CHECK_FALSE(bad.pass);
    CHECK(bad.ratio <= 1e-10);

    CHECK_THROWS_AS(kernel_check(sys, 10), config_error);
  }

  TEST_CASE("analytic data lands as its projections in the data vectors") {
    const TinyInstance t = tiny();
    ProblemData data;
    data.g0 = preset_sine(1, 1, 1, 1.0);
    data.g1 = preset_sine(1, 1, 1, 2.0);
    const SaddleSystem sys = assemble_saddle(t.space, t.grid, t.chi, data);
    const Vector p0 = h1_projection(t.space, data.g0.fn, data.g0.grad);
    const Vector p1 = l2_projection(t.space, data.g1.fn);
    CHECK((sys.g0_h - p0).lpNorm<Eigen::Infinity>() <= 1e-13);
    CHECK((sys.g1_h - p1).lpNorm<Eigen::Infinity>() <= 1e-13);
  }
}
