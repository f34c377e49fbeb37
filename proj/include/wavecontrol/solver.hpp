#pragma once

#include <string>

#include "wavecontrol/system.hpp"

namespace wavecontrol {

enum class SolverMethod { sparse_direct, minres, condensed };

struct SolverOptions {
  SolverMethod method = SolverMethod::sparse_direct;
  double rel_tol = 1e-10;        // target on |A x - b| / |b|
  int max_iterations = 200000;   // Krylov cap; refinement rounds for direct methods
  double pivot_threshold = 1.0;  // threshold pivoting for the direct factorization
};

struct SolveReport {
  std::string method;
  int iterations = 0;         // Krylov iterations, or refinement rounds used
  double rel_residual = 0.0;  // measured against the assembled matrix at exit
  double fill_ratio = 0.0;    // factor nonzeros / matrix nonzeros (direct only)
  double wall_seconds = 0.0;
  bool converged = false;
};

/// True relative residual |A x - b| / |b| (|b| = 0 falls back to |A x - b|).
double relative_residual(const SpMat& A, const Vector& x, const Vector& b);

/// Sparse LU with threshold pivoting plus iterative refinement.
Vector sparse_direct_solve(const SpMat& A, const Vector& b, double rel_tol,
                           double pivot_threshold, int max_refine, SolveReport* report);

/// MINRES on the symmetric indefinite system. Identity preconditioner: the
/// multiplier diagonal blocks are exactly zero, so Jacobi is undefined here.
Vector minres_solve(const SpMat& A, const Vector& b, double rel_tol, int max_iterations,
                    SolveReport* report);

/** Elimination tailored to the block recurrences of the coupled system: all
    interior time levels are swept out with one Cholesky factorization of
    W = M/tau + tau K, leaving a dense core on the 4*Nh boundary-in-time
    unknowns (u^0, u^1, U^{N-1}, U^N). Peak memory is O((4 Nh)^2 + N Nh),
    far below a sparse factorization of the full matrix, at the price of a
    dense LU of the core. Residuals are measured against the assembled matrix
    and polished by refinement through the same elimination. */
Vector condensed_solve(const SaddleSystem& sys, double rel_tol, int max_refine,
                       SolveReport* report);

/// Dispatch on opts.method.
Vector solve_saddle(const SaddleSystem& sys, const SolverOptions& opts,
                    SolveReport* report = nullptr);

}  // namespace wavecontrol
