#pragma once

#include <Eigen/Core>

#include "wavecontrol/data.hpp"
#include "wavecontrol/fem.hpp"
#include "wavecontrol/timegrid.hpp"

namespace wavecontrol {

/** Index layout of the coupled unknown x = (u, U, z, Z), block-major with
    time-major blocks of spatial dofs:
      u carries levels 0..N, U carries 0..N,
      z carries 2..N (z^0 = z^1 = 0 are structurally absent),
      Z carries 0..N-2 (Z^{N-1} = Z^N = 0 absent).
    Total size 4 N Nh. */
struct DofLayout {
  int N = 0;
  int Nh = 0;

  int total() const { return 4 * N * Nh; }
  int u_offset() const { return 0; }
  int U_offset() const { return (N + 1) * Nh; }
  int z_offset() const { return 2 * (N + 1) * Nh; }
  int Z_offset() const { return z_offset() + (N - 1) * Nh; }

  int u(int level) const;
  int U(int level) const;
  int z(int level) const;
  int Z(int level) const;
};

/// Multipliers on the data-mismatch penalty and the control stabilizer;
/// the defaults give the production functional, zeros are for rank checks.
struct SaddleScales {
  double r_weight = 1.0;
  double j1_weight = 1.0;
};

/** Assembled first-order optimality system A x = b for the space-time
    control functional, plus the pieces needed to evaluate its energies. */
struct SaddleSystem {
  SpMat A;
  Vector b;
  DofLayout layout;
  TimeGrid grid;
  double h = 0.0;
  SaddleScales scales;
  const FemSpace* space = nullptr;
  SpMat M;     // interior mass
  SpMat K;     // interior stiffness
  SpMat Mchi;  // cutoff-weighted interior mass
  Vector chi_vertices;
  Vector g0_h;  // elliptic projection of g0 (interior dofs)
  Vector g1_h;  // L2 projection of g1
};

/// Resolves the data (projections for analytic data, pass-through for nodal
/// data), assembles A and b, and records the component matrices.
SaddleSystem assemble_saddle(const FemSpace& space, const TimeGrid& grid,
                             const Vector& chi_vertices, const ProblemData& data,
                             SaddleScales scales = {});

struct StateFields {
  SpaceTimeField u, U, z, Z;
};

/// Splits a coupled vector into its four time series (copies).
StateFields extract_state(const SaddleSystem& sys, const Vector& x);
/// Packs four time series with the canonical ranges back into a vector.
Vector pack_state(const SaddleSystem& sys, const StateFields& f);

// Energy forms. All sums run over their natural level ranges and accumulate
// in extended precision.
double eval_G(const SaddleSystem& sys, const SpaceTimeField& u, const SpaceTimeField& z);
double eval_Gstar(const SaddleSystem& sys, const SpaceTimeField& Z, const SpaceTimeField& U);
double eval_R(const SaddleSystem& sys, const SpaceTimeField& u);
double eval_J1(const SaddleSystem& sys, const SpaceTimeField& U);
/// Full Lagrangian including the data terms; its exact directional derivative
/// is y . (A x - b).
double eval_J(const SaddleSystem& sys, const Vector& x);

struct KernelCheckResult {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double ratio = 0.0;
  bool pass = false;
};

/// Dense SVD rank check; guarded to systems of at most `max_dofs` unknowns.
KernelCheckResult kernel_check(const SaddleSystem& sys, int max_dofs = 2000,
                               double tol = 1e-10);

/// Max |A - A^T| entry over max |A| entry.
double max_asymmetry(const SpMat& A);

}  // namespace wavecontrol
