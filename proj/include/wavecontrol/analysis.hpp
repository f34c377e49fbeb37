#pragma once

#include <cstdint>

#include "wavecontrol/system.hpp"

namespace wavecontrol {

/// The seven discrete norms of a coupled state, each the square root of its
/// squared sum (accumulated in extended precision).
struct NormReport {
  double R = 0.0;       // boundary-in-time energies of u plus h-scaled U terms
  double F = 0.0;       // discrete H1-in-spacetime norm of u
  double Fprime = 0.0;  // strengthened space-time norm of U
  double D = 0.0;       // multiplier z norm (with integrated gradients)
  double Dprime = 0.0;  // multiplier Z norm, mirrored in time
  double C = 0.0;       // continuity norm: R plus plain L2 sums of z, Z
  double S = 0.0;       // localized control term plus all stability terms
};

NormReport compute_norms(const SaddleSystem& sys, const Vector& x);

/// Weighted running integral from below: out^n = tau * sum_{m=0..n} (1+m*tau) z^m,
/// levels of z outside its stored range count as zero (z^0 = z^1 = 0).
SpaceTimeField integrator_I(const TimeGrid& grid, const SpaceTimeField& z);

/// Mirrored integral from above: out^n = tau * sum_{m=n..N} (1+(N-m)*tau) Z^m,
/// with Z^{N-1} = Z^N = 0 absent from the stored range.
SpaceTimeField integrator_Itilde(const TimeGrid& grid, const SpaceTimeField& Z);

/** Stability test state for the coercivity check, with alpha = alpha0*gamma:
      v-part = u + gamma * (I z),
      V-part = U + alpha * (Itilde Z),
      w-part = -z + alpha * h^2 * w,   w^n = (2T - n*tau) * bdiff(u, n),
      W-part = -Z + gamma * h^2 * W,   W^n = fdiff2(U, n) + (2T - (N-n)*tau) * fdiff(U, n). */
Vector build_infsup_test(const SaddleSystem& sys, const Vector& x, double gamma, double alpha0);

/// Sweep ranges for the scalar pair (gamma, alpha0); gamma log-spaced,
/// alpha0 uniform strictly inside (0,1).
struct SweepGrid {
  double gamma_min = 1e-3;
  double gamma_max = 1.0;
  int n_gamma = 13;
  int n_alpha = 9;
};

struct InfSupReport {
  double gamma = 0.0;
  double alpha0 = 0.0;
  double c_emp = 0.0;  // worst trial of A(x; y(x)) / lower-bound functional at the best pair
  int trials = 0;
  double h = 0.0;
  double tau = 0.0;
  int N = 0;
  int Nh = 0;
  std::uint64_t seed = 0;
  bool pass = false;  // c_emp > 0
};

/** Empirical coercivity check: random unit-C states, evaluated through the
    assembled matrix against the lower bound
    R^2 + h^2 F^2 + h^2 F'^2 + D^2 + D'^2, maximized over the sweep grid. */
InfSupReport infsup_check(const FemSpace& space, const TimeGrid& grid,
                          const Vector& chi_vertices, int trials, const SweepGrid& sweep = {},
                          std::uint64_t seed = 0x5eedULL);

/** Forward implicit solve of the controlled state recursion
    (M/tau^2 + K) u^n = Mchi U^n + (M/tau^2)(2u^{n-1} - u^{n-2}), n = 2..N,
    from nodal initial levels. U must cover levels 2..N. */
SpaceTimeField forward_wave_solve(const FemSpace& space, const TimeGrid& grid,
                                  const Vector& chi_vertices, const SpaceTimeField& U,
                                  const Vector& u0, const Vector& u1);

/// Same, with u^0 the elliptic projection of g0 and u^1 = u^0 + tau * (L2
/// projection of g1).
SpaceTimeField forward_wave_solve(const FemSpace& space, const TimeGrid& grid,
                                  const Vector& chi_vertices, const SpaceTimeField& U,
                                  const ProblemData& data);

/// Backward solve of the control recursion
/// (M/tau^2 + K) U^n = (M/tau^2)(2U^{n+1} - U^{n+2}), n = N-2..0.
SpaceTimeField backward_wave_solve(const FemSpace& space, const TimeGrid& grid,
                                   const Vector& UN, const Vector& UNm1);

/// Discrete energy (1/2)|bdiff f^n|_M^2 + (1/2)|f^n|_K^2, n >= f.first + 1.
double wave_energy(const SpMat& M, const SpMat& K, const SpaceTimeField& f, int n);

struct ConsistencyReport {
  double max_forward_residual = 0.0;   // state recursion, worst relative level residual
  double max_backward_residual = 0.0;  // control recursion, worst relative level residual
  bool energy_monotone = false;        // homogeneous forward solve dissipates
  double final_energy = 0.0;           // |grad u^N|^2 + |bdiff u^N|^2
  bool pass = false;
};

/// Re-derives both recursions level by level from a solved state, without
/// the assembled matrix, and checks the dissipativity of the homogeneous
/// forward scheme started from the state's own initial levels.
ConsistencyReport consistency_check(const SaddleSystem& sys, const Vector& x, double tol = 1e-8);

/// |v|_{-1,h} = sqrt((Mv)^T y), K y = M v, with the Dirichlet stiffness K.
double discrete_hminus1_norm(const FemSpace& space, const Vector& v);

}  // namespace wavecontrol
