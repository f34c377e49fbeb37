#include "wavecontrol/analysis.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace wavecontrol {

namespace {

using SpMatCol = Eigen::SparseMatrix<double>;

long double ldot(const Vector& a, const Vector& b) {
  long double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    acc += static_cast<long double>(a(i)) * static_cast<long double>(b(i));
  }
  return acc;
}

long double quad(const SpMat& A, const Vector& v) { return ldot(v, A * v); }

// Level of f, or zero when the level is outside the stored range.
Vector level_or_zero(const SpaceTimeField& f, int n) {
  if (n < f.first || n > f.last) return Vector::Zero(f.n_dofs());
  return f.at(n);
}

struct SquaredNorms {
  long double R2 = 0, F2 = 0, Fp2 = 0, D2 = 0, Dp2 = 0, C2 = 0, S2 = 0;
};

SquaredNorms squared_norms(const SaddleSystem& sys, const StateFields& f) {
  const int N = sys.grid.N;
  const double tau = sys.grid.tau, h2 = sys.h * sys.h;
  const SpMat &M = sys.M, &K = sys.K;
  SquaredNorms out;

  out.R2 = quad(K, f.u.at(N)) + quad(M, backward_diff(f.u, N)) + quad(K, f.u.at(0)) +
           quad(M, backward_diff(f.u, 1));
  for (int n = 1; n <= N; ++n) out.R2 += tau * h2 * quad(K, backward_diff(f.U, n));
  out.R2 += h2 * quad(K, backward_diff(f.U, N)) + h2 * quad(K, backward_diff(f.U, 1)) +
            h2 * quad(K, f.U.at(N));

  for (int n = 1; n <= N; ++n) {
    out.F2 += tau * (quad(M, backward_diff(f.u, n)) + quad(K, f.u.at(n)));
  }

  for (int n = 2; n <= N; ++n) {
    out.Fp2 += tau * (quad(M, backward_diff2(f.U, n)) + quad(K, backward_diff(f.U, n)) +
                      quad(M, backward_diff(f.U, n)) + quad(K, f.U.at(n)));
  }
  out.Fp2 += quad(M, backward_diff(f.U, 1)) + quad(K, f.U.at(1));

  const SpaceTimeField Iz = integrator_I(sys.grid, f.z);
  long double z_l2 = 0;
  for (int n = 2; n <= N; ++n) {
    z_l2 += tau * quad(M, f.z.at(n));
    out.D2 += tau * quad(K, Iz.at(n));
  }
  out.D2 += z_l2 + quad(K, Iz.at(N)) + quad(M, f.z.at(N));

  const SpaceTimeField IZ = integrator_Itilde(sys.grid, f.Z);
  long double Z_l2 = 0;
  for (int n = 0; n <= N - 2; ++n) {
    Z_l2 += tau * quad(M, f.Z.at(n));
    out.Dp2 += tau * quad(K, IZ.at(n));
  }
  out.Dp2 += Z_l2 + quad(K, IZ.at(0)) + quad(M, f.Z.at(0));

  out.C2 = out.R2 + z_l2 + Z_l2;

  long double chi2 = 0;
  for (int n = 2; n <= N; ++n) chi2 += tau * quad(sys.Mchi, f.U.at(n));
  out.S2 = chi2 + out.R2 + h2 * out.F2 + h2 * out.Fp2 + out.D2 + out.Dp2;
  return out;
}

double root(long double v) { return std::sqrt(static_cast<double>(v)); }

}  // namespace

NormReport compute_norms(const SaddleSystem& sys, const Vector& x) {
  const StateFields f = extract_state(sys, x);
  const SquaredNorms s = squared_norms(sys, f);
  NormReport r;
  r.R = root(s.R2);
  r.F = root(s.F2);
  r.Fprime = root(s.Fp2);
  r.D = root(s.D2);
  r.Dprime = root(s.Dp2);
  r.C = root(s.C2);
  r.S = root(s.S2);
  return r;
}

SpaceTimeField integrator_I(const TimeGrid& grid, const SpaceTimeField& z) {
  SpaceTimeField out = make_field(grid, 0, grid.N, z.n_dofs());
  Vector acc = Vector::Zero(z.n_dofs());
  for (int n = 0; n <= grid.N; ++n) {
    acc += (1.0 + n * grid.tau) * level_or_zero(z, n);
    out.at(n) = grid.tau * acc;
  }
  return out;
}

SpaceTimeField integrator_Itilde(const TimeGrid& grid, const SpaceTimeField& Z) {
  const int N = grid.N;
  SpaceTimeField out = make_field(grid, 0, N, Z.n_dofs());
  Vector acc = Vector::Zero(Z.n_dofs());
  for (int n = N; n >= 0; --n) {
    acc += (1.0 + (N - n) * grid.tau) * level_or_zero(Z, n);
    out.at(n) = grid.tau * acc;
  }
  return out;
}

Vector build_infsup_test(const SaddleSystem& sys, const Vector& x, double gamma, double alpha0) {
  const StateFields f = extract_state(sys, x);
  const int N = sys.grid.N;
  const double tau = sys.grid.tau, T = sys.grid.T, h2 = sys.h * sys.h;
  const double alpha = alpha0 * gamma;

  const SpaceTimeField Iz = integrator_I(sys.grid, f.z);
  const SpaceTimeField IZ = integrator_Itilde(sys.grid, f.Z);

  StateFields y{make_field(sys.grid, 0, N, sys.layout.Nh),
                make_field(sys.grid, 0, N, sys.layout.Nh),
                make_field(sys.grid, 2, N, sys.layout.Nh),
                make_field(sys.grid, 0, N - 2, sys.layout.Nh)};
  for (int n = 0; n <= N; ++n) {
    y.u.at(n) = f.u.at(n) + gamma * Iz.at(n);
    y.U.at(n) = f.U.at(n) + alpha * IZ.at(n);
  }
  for (int n = 2; n <= N; ++n) {
    const Vector w = (2.0 * T - n * tau) * backward_diff(f.u, n);
    y.z.at(n) = -f.z.at(n) + alpha * h2 * w;
  }
  for (int n = 0; n <= N - 2; ++n) {
    const Vector W = forward_diff2(f.U, n) + (2.0 * T - (N - n) * tau) * forward_diff(f.U, n);
    y.Z.at(n) = -f.Z.at(n) + gamma * h2 * W;
  }
  return pack_state(sys, y);
}

InfSupReport infsup_check(const FemSpace& space, const TimeGrid& grid,
                          const Vector& chi_vertices, int trials, const SweepGrid& sweep,
                          std::uint64_t seed) {
  if (trials < 1) throw config_error("infsup: trials must be positive");
  if (sweep.n_gamma < 1 || sweep.n_alpha < 1 || sweep.gamma_min <= 0.0 ||
      sweep.gamma_max < sweep.gamma_min) {
    throw config_error("infsup: malformed sweep grid");
  }
  const SaddleSystem sys = assemble_saddle(space, grid, chi_vertices, ProblemData{});
  const int N = grid.N, Nh = space.n_dofs;
  const double h2 = sys.h * sys.h;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Per trial: A(x; y-hat) = d0 + gamma*d1 + alpha0*gamma*d2 against the
  // lower bound, so the scalar sweep costs three dot products per trial.
  std::vector<double> d0s, d1s, d2s, lbs;
  d0s.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    Vector x(sys.layout.total());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
    {
      const NormReport n0 = compute_norms(sys, x);
      if (!(n0.C > 0.0)) {
        --t;  // degenerate draw; redraw (cannot happen with continuous sampling)
        continue;
      }
      x /= n0.C;
    }
    const StateFields f = extract_state(sys, x);
    const SquaredNorms s = squared_norms(sys, f);
    const double lb = static_cast<double>(s.R2 + h2 * s.F2 + h2 * s.Fp2 + s.D2 + s.Dp2);

    const Vector Ax = sys.A * x;
    // Decomposition of the test state: y-hat = y0 + gamma*y1 + alpha0*gamma*y2.
    const Vector y0 = build_infsup_test(sys, x, 0.0, 0.0);
    Vector y1 = build_infsup_test(sys, x, 1.0, 0.0);
    y1 -= y0;
    Vector y2 = build_infsup_test(sys, x, 1.0, 1.0);
    y2 -= y0;
    y2 -= y1;
    d0s.push_back(static_cast<double>(ldot(Ax, y0)));
    d1s.push_back(static_cast<double>(ldot(Ax, y1)));
    d2s.push_back(static_cast<double>(ldot(Ax, y2)));
    lbs.push_back(lb);
  }

  InfSupReport rep;
  rep.trials = trials;
  rep.h = sys.h;
  rep.tau = grid.tau;
  rep.N = N;
  rep.Nh = Nh;
  rep.seed = seed;
  rep.c_emp = -std::numeric_limits<double>::infinity();
  for (int ig = 0; ig < sweep.n_gamma; ++ig) {
    const double lg = sweep.n_gamma == 1
                          ? std::log(sweep.gamma_min)
                          : std::log(sweep.gamma_min) +
                                (std::log(sweep.gamma_max) - std::log(sweep.gamma_min)) * ig /
                                    (sweep.n_gamma - 1);
    const double gamma = std::exp(lg);
    for (int ia = 0; ia < sweep.n_alpha; ++ia) {
      const double alpha0 = (ia + 1.0) / (sweep.n_alpha + 1.0);
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < d0s.size(); ++t) {
        const double num = d0s[t] + gamma * d1s[t] + alpha0 * gamma * d2s[t];
        worst = std::min(worst, num / lbs[t]);
      }
      if (worst > rep.c_emp) {
        rep.c_emp = worst;
        rep.gamma = gamma;
        rep.alpha0 = alpha0;
      }
    }
  }
  rep.pass = rep.c_emp > 0.0;
  return rep;
}

SpaceTimeField forward_wave_solve(const FemSpace& space, const TimeGrid& grid,
                                  const Vector& chi_vertices, const SpaceTimeField& U,
                                  const Vector& u0, const Vector& u1) {
  const int N = grid.N;
  const double tau2 = grid.tau * grid.tau;
  if (u0.size() != space.n_dofs || u1.size() != space.n_dofs) {
    throw shape_error("forward solve: initial level length does not match the space");
  }
  const SpMat M = assemble_mass(space);
  const SpMat K = assemble_stiffness(space);
  const SpMat Mchi = assemble_weighted_mass(space, chi_vertices);
  Eigen::SimplicialLLT<SpMatCol> W;
  W.compute(SpMatCol((1.0 / tau2) * M + K));
  if (W.info() != Eigen::Success) {
    throw numeric_error("forward solve: factorization of M/tau^2 + K failed");
  }

  SpaceTimeField u = make_field(grid, 0, N, space.n_dofs);
  u.at(0) = u0;
  u.at(1) = u1;
  for (int n = 2; n <= N; ++n) {
    const Vector rhs = Mchi * U.at(n) + (1.0 / tau2) * (M * (2.0 * u.at(n - 1) - u.at(n - 2)));
    u.at(n) = W.solve(rhs);
  }
  return u;
}

SpaceTimeField forward_wave_solve(const FemSpace& space, const TimeGrid& grid,
                                  const Vector& chi_vertices, const SpaceTimeField& U,
                                  const ProblemData& data) {
  const Vector u0 = nodal_representation(data.g0, space, /*elliptic=*/true);
  const Vector u1 = u0 + grid.tau * nodal_representation(data.g1, space, /*elliptic=*/false);
  return forward_wave_solve(space, grid, chi_vertices, U, u0, u1);
}

SpaceTimeField backward_wave_solve(const FemSpace& space, const TimeGrid& grid,
                                   const Vector& UN, const Vector& UNm1) {
  const int N = grid.N;
  const double tau2 = grid.tau * grid.tau;
  if (UN.size() != space.n_dofs || UNm1.size() != space.n_dofs) {
    throw shape_error("backward solve: final level length does not match the space");
  }
  const SpMat M = assemble_mass(space);
  const SpMat K = assemble_stiffness(space);
  Eigen::SimplicialLLT<SpMatCol> W;
  W.compute(SpMatCol((1.0 / tau2) * M + K));
  if (W.info() != Eigen::Success) {
    throw numeric_error("backward solve: factorization of M/tau^2 + K failed");
  }

  SpaceTimeField U = make_field(grid, 0, N, space.n_dofs);
  U.at(N) = UN;
  U.at(N - 1) = UNm1;
  for (int n = N - 2; n >= 0; --n) {
    const Vector rhs = (1.0 / tau2) * (M * (2.0 * U.at(n + 1) - U.at(n + 2)));
    U.at(n) = W.solve(rhs);
  }
  return U;
}

double wave_energy(const SpMat& M, const SpMat& K, const SpaceTimeField& f, int n) {
  return 0.5 * static_cast<double>(quad(M, backward_diff(f, n)) + quad(K, f.at(n)));
}

ConsistencyReport consistency_check(const SaddleSystem& sys, const Vector& x, double tol) {
  const StateFields f = extract_state(sys, x);
  const int N = sys.grid.N;
  const double tau2 = sys.grid.tau * sys.grid.tau;
  ConsistencyReport rep;

  for (int n = 2; n <= N; ++n) {
    const Vector a = (1.0 / tau2) * (sys.M * (f.u.at(n) - 2.0 * f.u.at(n - 1) + f.u.at(n - 2)));
    const Vector b = sys.K * f.u.at(n);
    const Vector c = sys.Mchi * f.U.at(n);
    const double den = a.norm() + b.norm() + c.norm();
    const double num = (a + b - c).norm();
    rep.max_forward_residual =
        std::max(rep.max_forward_residual, den > 0.0 ? num / den : num);
  }
  for (int n = 0; n <= N - 2; ++n) {
    const Vector a = (1.0 / tau2) * (sys.M * (f.U.at(n) - 2.0 * f.U.at(n + 1) + f.U.at(n + 2)));
    const Vector b = sys.K * f.U.at(n);
    const double den = a.norm() + b.norm();
    const double num = (a + b).norm();
    rep.max_backward_residual =
        std::max(rep.max_backward_residual, den > 0.0 ? num / den : num);
  }

  const SpaceTimeField zero_control = make_field(sys.grid, 0, N, sys.layout.Nh);
  const SpaceTimeField uh = forward_wave_solve(*sys.space, sys.grid, sys.chi_vertices,
                                               zero_control, f.u.at(0), f.u.at(1));
  rep.energy_monotone = true;
  double prev = wave_energy(sys.M, sys.K, uh, 1);
  for (int n = 2; n <= N; ++n) {
    const double e = wave_energy(sys.M, sys.K, uh, n);
    if (e > prev * (1.0 + 1e-12) + 1e-300) rep.energy_monotone = false;
    prev = e;
  }

  rep.final_energy = static_cast<double>(quad(sys.K, f.u.at(N)) +
                                         quad(sys.M, backward_diff(f.u, N)));
  rep.pass = rep.max_forward_residual <= tol && rep.max_backward_residual <= tol &&
             rep.energy_monotone;
  return rep;
}

double discrete_hminus1_norm(const FemSpace& space, const Vector& v) {
  if (v.size() != space.n_dofs) throw shape_error("hminus1: vector length does not match space");
  const SpMat M = assemble_mass(space);
  const SpMat K = assemble_stiffness(space);
  Eigen::SimplicialLLT<SpMatCol> llt;
  llt.compute(SpMatCol(K));
  if (llt.info() != Eigen::Success) {
    throw numeric_error("hminus1: stiffness factorization failed");
  }
  const Vector Mv = M * v;
  const Vector y = llt.solve(Mv);
  return std::sqrt(std::max(0.0, static_cast<double>(ldot(Mv, y))));
}

}  // namespace wavecontrol
