#include "wavecontrol/solver.hpp"

#include <Eigen/SparseLU>
#include <chrono>
#include <unsupported/Eigen/IterativeSolvers>

namespace wavecontrol {

namespace {

using SpMatCol = Eigen::SparseMatrix<double>;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

double relative_residual(const SpMat& A, const Vector& x, const Vector& b) {
  const double rnorm = (A * x - b).norm();
  const double bnorm = b.norm();
  return bnorm > 0.0 ? rnorm / bnorm : rnorm;
}

Vector sparse_direct_solve(const SpMat& A, const Vector& b, double rel_tol,
                           double pivot_threshold, int max_refine, SolveReport* report) {
  const auto t0 = Clock::now();
  if (b.size() != A.rows()) throw shape_error("solver: rhs length does not match matrix");
  if (report) *report = SolveReport{"sparse_direct", 0, 0.0, 0.0, 0.0, false};

  if (b.norm() == 0.0) {
    if (report) {
      report->converged = true;
      report->wall_seconds = seconds_since(t0);
    }
    return Vector::Zero(A.cols());
  }

  const SpMatCol Ac(A);
  Eigen::SparseLU<SpMatCol, Eigen::COLAMDOrdering<int>> lu;
  lu.setPivotThreshold(pivot_threshold);
  lu.compute(Ac);
  if (lu.info() != Eigen::Success) {
    throw numeric_error("solver: sparse LU factorization failed (singular system?)");
  }

  Vector x = lu.solve(b);
  double res = relative_residual(A, x, b);
  int rounds = 0;
  while (res > rel_tol && rounds < max_refine) {
    const Vector dx = lu.solve(Vector(b - A * x));
    x += dx;
    const double next = relative_residual(A, x, b);
    ++rounds;
    if (next >= res) break;  // refinement stagnated
    res = next;
  }

  if (report) {
    report->iterations = rounds;
    report->rel_residual = res;
    report->fill_ratio =
        A.nonZeros() > 0 ? double(lu.nnzL() + lu.nnzU()) / double(A.nonZeros()) : 0.0;
    report->wall_seconds = seconds_since(t0);
    report->converged = res <= rel_tol;
  }
  if (res > rel_tol * 1e3) {
    throw numeric_error("solver: direct solve residual " + std::to_string(res) +
                        " far above tolerance");
  }
  return x;
}

Vector minres_solve(const SpMat& A, const Vector& b, double rel_tol, int max_iterations,
                    SolveReport* report) {
  const auto t0 = Clock::now();
  if (b.size() != A.rows()) throw shape_error("solver: rhs length does not match matrix");
  if (report) *report = SolveReport{"minres", 0, 0.0, 0.0, 0.0, false};

  if (b.norm() == 0.0) {
    if (report) {
      report->converged = true;
      report->wall_seconds = seconds_since(t0);
    }
    return Vector::Zero(A.cols());
  }

  const SpMatCol Ac(A);
  Eigen::MINRES<SpMatCol, Eigen::Lower | Eigen::Upper, Eigen::IdentityPreconditioner> solver;
  solver.setTolerance(rel_tol);
  solver.setMaxIterations(max_iterations);
  solver.compute(Ac);
  Vector x = solver.solve(b);
  const double res = relative_residual(A, x, b);

  if (report) {
    report->iterations = static_cast<int>(solver.iterations());
    report->rel_residual = res;
    report->wall_seconds = seconds_since(t0);
    report->converged = res <= rel_tol;
  }
  return x;
}

Vector solve_saddle(const SaddleSystem& sys, const SolverOptions& opts, SolveReport* report) {
  switch (opts.method) {
    case SolverMethod::sparse_direct:
      return sparse_direct_solve(sys.A, sys.b, opts.rel_tol, opts.pivot_threshold,
                                 std::min(opts.max_iterations, 10), report);
    case SolverMethod::minres:
      return minres_solve(sys.A, sys.b, opts.rel_tol, opts.max_iterations, report);
    case SolverMethod::condensed:
      return condensed_solve(sys, opts.rel_tol, std::min(opts.max_iterations, 10), report);
  }
  throw config_error("solver: unknown method");
}

}  // namespace wavecontrol
