#include <cmath>
#include <random>

#include "doctest.h"
#include "wavecontrol/analysis.hpp"
#include "wavecontrol/cutoff.hpp"
#include "wavecontrol/data.hpp"
#include "wavecontrol/solver.hpp"

using namespace wavecontrol;

namespace {

// Owns the mesh and space the assembled system points into.
struct Instance {
  Mesh mesh;
  FemSpace space;
  TimeGrid grid;
  Vector chi;
  SaddleSystem sys;

  explicit Instance(double target_h = 0.25, double T = 2.0, int N = 8) {
    DomainSpec d;
    d.kind = DomainKind::unit_interval;
    d.target_h = target_h;
    mesh = build_mesh(d);
    space = make_space(mesh);
    grid = make_time_grid(T, N);
    CutoffSpec c;
    c.r = 0.3;
    c.delta = 0.1;
    chi = discretize_cutoff(build_cutoff(d, c), mesh);
    ProblemData data;
    data.g0 = preset_sine(1, 1, 1, 1.0);
    sys = assemble_saddle(space, grid, chi, data);
  }
};

Vector random_vector(Eigen::Index n, std::mt19937& gen) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(gen);
  return v;
}

SpaceTimeField random_field(const TimeGrid& grid, int first, int last, int nh,
                            std::mt19937& gen) {
  SpaceTimeField f = make_field(grid, first, last, nh);
  for (int n = first; n <= last; ++n) f.at(n) = random_vector(nh, gen);
  return f;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("weighted running integral hits its closed-form value on a constant") {
    const TimeGrid grid = make_time_grid(2.0, 8);  // tau = 1/4
    const double c = 0.7;
    SpaceTimeField z = make_field(grid, 2, grid.N, 3);
    for (int n = 2; n <= grid.N; ++n) z.at(n) = c * Vector::Ones(3);

    const SpaceTimeField out = integrator_I(grid, z);
    CHECK(out.first == 0);
    CHECK(out.last == grid.N);
    // Levels 0 and 1 of z count as zero, so the level-3 sum is
    // tau * ((1 + 2 tau) + (1 + 3 tau)) * c = 0.8125 c.
    CHECK(out.at(0).norm() == 0.0);
    for (int i = 0; i < 3; ++i) {
      CHECK(out.at(3)(i) == doctest::Approx(0.8125 * c).epsilon(1e-14));
    }

    SpaceTimeField Z = make_field(grid, 0, grid.N - 2, 3);
    for (int n = 0; n <= grid.N - 2; ++n) Z.at(n) = c * Vector::Ones(3);
    const SpaceTimeField out_t = integrator_Itilde(grid, Z);
    CHECK(out_t.first == 0);
    CHECK(out_t.last == grid.N);
    CHECK(out_t.at(grid.N).norm() == 0.0);
    for (int i = 0; i < 3; ++i) {
      CHECK(out_t.at(grid.N - 3)(i) == doctest::Approx(0.8125 * c).epsilon(1e-14));
    }
  }

  TEST_CASE("the mirrored integral of the reversed field reverses the integral") {
    const TimeGrid grid = make_time_grid(2.0, 8);
    std::mt19937 gen(97u);
    const SpaceTimeField z = random_field(grid, 2, grid.N, 4, gen);
    SpaceTimeField Z = make_field(grid, 0, grid.N - 2, 4);
    for (int n = 0; n <= grid.N - 2; ++n) Z.at(n) = z.at(grid.N - n);

    const SpaceTimeField I = integrator_I(grid, z);
    const SpaceTimeField It = integrator_Itilde(grid, Z);
    for (int n = 0; n <= grid.N; ++n) {
      CHECK((It.at(n) - I.at(grid.N - n)).lpNorm<Eigen::Infinity>() <= 1e-14);
    }
  }

  TEST_CASE("norms vanish at zero and scale linearly") {
    const Instance t;
    const Vector zero = Vector::Zero(t.sys.layout.total());
    const NormReport n0 = compute_norms(t.sys, zero);
    CHECK(n0.R == 0.0);
    CHECK(n0.F == 0.0);
    CHECK(n0.Fprime == 0.0);
    CHECK(n0.D == 0.0);
    CHECK(n0.Dprime == 0.0);
    CHECK(n0.C == 0.0);
    CHECK(n0.S == 0.0);

    std::mt19937 gen(5u);
    const Vector x = random_vector(t.sys.layout.total(), gen);
    const NormReport a = compute_norms(t.sys, x);
    const NormReport b = compute_norms(t.sys, Vector(2.0 * x));
    CHECK(a.R > 0.0);
    CHECK(a.C > 0.0);
    CHECK(b.R == doctest::Approx(2.0 * a.R).epsilon(1e-12));
    CHECK(b.F == doctest::Approx(2.0 * a.F).epsilon(1e-12));
    CHECK(b.Fprime == doctest::Approx(2.0 * a.Fprime).epsilon(1e-12));
    CHECK(b.D == doctest::Approx(2.0 * a.D).epsilon(1e-12));
    CHECK(b.Dprime == doctest::Approx(2.0 * a.Dprime).epsilon(1e-12));
    CHECK(b.C == doctest::Approx(2.0 * a.C).epsilon(1e-12));
    CHECK(b.S == doctest::Approx(2.0 * a.S).epsilon(1e-12));
  }

  TEST_CASE("the stability test state follows its per-block formulas") {
    const Instance t;
    const double gamma = 0.3, alpha0 = 0.6;
    const double alpha = alpha0 * gamma;
    const double h2 = t.sys.h * t.sys.h;
    const double T = t.grid.T, tau = t.grid.tau;
    const int N = t.grid.N;

    std::mt19937 gen(13u);
    const Vector x = random_vector(t.sys.layout.total(), gen);
    const StateFields s = extract_state(t.sys, x);
    const StateFields y = extract_state(t.sys, build_infsup_test(t.sys, x, gamma, alpha0));

    const SpaceTimeField Iz = integrator_I(t.grid, s.z);
    const SpaceTimeField ItZ = integrator_Itilde(t.grid, s.Z);
    for (int n = 0; n <= N; ++n) {
      const Vector v_ref = s.u.at(n) + gamma * Iz.at(n);
      const Vector V_ref = s.U.at(n) + alpha * ItZ.at(n);
      CHECK((y.u.at(n) - v_ref).lpNorm<Eigen::Infinity>() <= 1e-13);
      CHECK((y.U.at(n) - V_ref).lpNorm<Eigen::Infinity>() <= 1e-13);
    }
    for (int n = 2; n <= N; ++n) {
      const Vector w_ref =
          -s.z.at(n) + alpha * h2 * (2.0 * T - n * tau) * backward_diff(s.u, n);
      CHECK((y.z.at(n) - w_ref).lpNorm<Eigen::Infinity>() <= 1e-13);
    }
    for (int n = 0; n <= N - 2; ++n) {
      const Vector W_ref =
          -s.Z.at(n) + gamma * h2 *
                           (forward_diff2(s.U, n) +
                            (2.0 * T - (N - n) * tau) * forward_diff(s.U, n));
      CHECK((y.Z.at(n) - W_ref).lpNorm<Eigen::Infinity>() <= 1e-13);
    }
  }

  TEST_CASE("the empirical coercivity check passes and is reproducible") {
    const Instance t;
    const InfSupReport r1 = infsup_check(t.space, t.grid, t.chi, 20, {}, 2024u);
    CHECK(r1.pass);
    CHECK(r1.c_emp > 0.0);
    CHECK(r1.trials == 20);
    CHECK(r1.seed == 2024u);
    CHECK(r1.N == t.grid.N);
    CHECK(r1.Nh == t.space.n_dofs);
    CHECK(r1.h == doctest::Approx(t.mesh.grid_step));
    CHECK(r1.tau == doctest::Approx(t.grid.tau));
    CHECK(r1.gamma > 0.0);
    CHECK(r1.alpha0 > 0.0);
    CHECK(r1.alpha0 < 1.0);

    const InfSupReport r2 = infsup_check(t.space, t.grid, t.chi, 20, {}, 2024u);
    CHECK(r2.c_emp == r1.c_emp);
    CHECK(r2.gamma == r1.gamma);
    CHECK(r2.alpha0 == r1.alpha0);
  }

  TEST_CASE("the forward solve satisfies its recursion level by level") {
    const Instance t;
    const int Nh = t.space.n_dofs;
    const double tau = t.grid.tau;
    std::mt19937 gen(41u);
    const SpaceTimeField U = random_field(t.grid, 2, t.grid.N, Nh, gen);
    const Vector u0 = random_vector(Nh, gen);
    const Vector u1 = random_vector(Nh, gen);

    const SpaceTimeField u = forward_wave_solve(t.space, t.grid, t.chi, U, u0, u1);
    CHECK(u.first == 0);
    CHECK(u.last == t.grid.N);
    CHECK((u.at(0) - u0).norm() == 0.0);
    CHECK((u.at(1) - u1).norm() == 0.0);

    const SpMat& M = t.sys.M;
    const SpMat& K = t.sys.K;
    const SpMat& Mchi = t.sys.Mchi;
    for (int n = 2; n <= t.grid.N; ++n) {
      const Vector lhs = (M * u.at(n)) / (tau * tau) + K * u.at(n);
      const Vector rhs =
          Mchi * U.at(n) + (M * (2.0 * u.at(n - 1) - u.at(n - 2))) / (tau * tau);
      CHECK((lhs - rhs).norm() <= 1e-11 * std::max(1.0, rhs.norm()));
    }
  }

  TEST_CASE("the data overload starts from the projected initial levels") {
    const Instance t;
    ProblemData data;
    data.g0 = preset_sine(1, 1, 1, 1.0);
    data.g1 = preset_sine(1, 2, 1, 0.5);
    SpaceTimeField U = make_field(t.grid, 2, t.grid.N, t.space.n_dofs);
    for (int n = 2; n <= t.grid.N; ++n) U.at(n) = Vector::Zero(t.space.n_dofs);

    const SpaceTimeField u = forward_wave_solve(t.space, t.grid, t.chi, U, data);
    const Vector p0 = h1_projection(t.space, data.g0.fn, data.g0.grad);
    const Vector p1 = l2_projection(t.space, data.g1.fn);
    CHECK((u.at(0) - p0).lpNorm<Eigen::Infinity>() <= 1e-13);
    CHECK((u.at(1) - (p0 + t.grid.tau * p1)).lpNorm<Eigen::Infinity>() <= 1e-13);
  }

  TEST_CASE("the homogeneous implicit scheme dissipates the discrete energy") {
    const Instance t;
    const int Nh = t.space.n_dofs;
    std::mt19937 gen(59u);
    SpaceTimeField U = make_field(t.grid, 2, t.grid.N, Nh);
    for (int n = 2; n <= t.grid.N; ++n) U.at(n) = Vector::Zero(Nh);
    const Vector u0 = random_vector(Nh, gen);

    const SpaceTimeField u = forward_wave_solve(t.space, t.grid, t.chi, U, u0, u0);
    double prev = wave_energy(t.sys.M, t.sys.K, u, 1);
    CHECK(prev > 0.0);
    for (int n = 2; n <= t.grid.N; ++n) {
      const double e = wave_energy(t.sys.M, t.sys.K, u, n);
      CHECK(e <= prev * (1.0 + 1e-12) + 1e-15);
      prev = e;
    }

    // Frozen formula at level 1: (1/2)|(u1-u0)/tau|_M^2 + (1/2)|u1|_K^2.
    const Vector du = (u.at(1) - u.at(0)) / t.grid.tau;
    const double e1 = 0.5 * du.dot(t.sys.M * du) + 0.5 * u.at(1).dot(t.sys.K * u.at(1));
    CHECK(wave_energy(t.sys.M, t.sys.K, u, 1) == doctest::Approx(e1).epsilon(1e-13));
  }

  TEST_CASE("the backward solve satisfies the control recursion") {
    const Instance t;
    const int Nh = t.space.n_dofs;
    const double tau = t.grid.tau;
    std::mt19937 gen(71u);
    const Vector UN = random_vector(Nh, gen);
    const Vector UNm1 = random_vector(Nh, gen);

    const SpaceTimeField U = backward_wave_solve(t.space, t.grid, UN, UNm1);
    CHECK(U.first == 0);
    CHECK(U.last == t.grid.N);
    CHECK((U.at(t.grid.N) - UN).norm() == 0.0);
    CHECK((U.at(t.grid.N - 1) - UNm1).norm() == 0.0);
    for (int n = t.grid.N - 2; n >= 0; --n) {
      const Vector lhs = (t.sys.M * U.at(n)) / (tau * tau) + t.sys.K * U.at(n);
      const Vector rhs = (t.sys.M * (2.0 * U.at(n + 1) - U.at(n + 2))) / (tau * tau);
      CHECK((lhs - rhs).norm() <= 1e-11 * std::max(1.0, rhs.norm()));
    }
  }

  TEST_CASE("a solved system passes the recursion-based consistency check") {
    const Instance t;
    SolverOptions opts;
    opts.method = SolverMethod::sparse_direct;
    opts.rel_tol = 1e-12;
    const Vector x = solve_saddle(t.sys, opts);

    const ConsistencyReport rep = consistency_check(t.sys, x, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.max_forward_residual <= 1e-8);
    CHECK(rep.max_backward_residual <= 1e-8);
    CHECK(rep.energy_monotone);
    CHECK(rep.final_energy >= 0.0);

    const ConsistencyReport strict = consistency_check(t.sys, x, 1e-30);
    CHECK_FALSE(strict.pass);
  }

  TEST_CASE("the negative-order norm matches the eigenvector closed form") {
    const Instance t;  // interval, h = 1/4
    const double h = t.mesh.grid_step;
    const double pi = std::acos(-1.0);
    Vector v(t.space.n_dofs);
    for (int i = 0; i < t.space.n_dofs; ++i) {
      const double xi = t.mesh.vertices[static_cast<std::size_t>(t.space.vertex_of_dof[i])][0];
      v(i) = std::sin(pi * xi);
    }
    // v is the first eigenvector of K y = lambda M y, so |v|_{-1}^2 = v^T M v / lambda_1.
    const double lambda1 = (6.0 / (h * h)) * (1.0 - std::cos(pi * h)) / (2.0 + std::cos(pi * h));
    const double expected = std::sqrt(v.dot(t.sys.M * v) / lambda1);
    CHECK(discrete_hminus1_norm(t.space, v) == doctest::Approx(expected).epsilon(1e-11));
  }
}
