#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <chrono>
#include <utility>
#include <vector>

#include "wavecontrol/solver.hpp"

namespace wavecontrol {

namespace {

using Eigen::MatrixXd;
using SpMatCol = Eigen::SparseMatrix<double>;
using Clock = std::chrono::steady_clock;
using Wfact = Eigen::SimplicialLLT<SpMatCol>;

// Multi-column space-time fields, indexed by time level.
using Levels = std::vector<MatrixXd>;

struct SweepOutput {
  // Residuals of the four closure rows (u-rows 0 and 1, U-rows N-1 and N),
  // stacked to (4*Nh) x ncols.
  MatrixXd F;
  Levels u, U, z, Z;
};

/** Eliminates every interior time level for given boundary-in-time loads
    (u^0, u^1, U^{N-1}, U^N), each an Nh x ncols block of independent columns,
    plus an optional full right-hand side applied to column 0. Sweep order:
    U backward, u forward, z backward, Z forward; each level costs one solve
    with W = M/tau + tau*K. Every matrix row is consumed exactly once, so the
    returned closure residuals vanish iff the coupled system is solved. */
SweepOutput sweep(const SaddleSystem& sys, const Wfact& W, const MatrixXd& u0,
                  const MatrixXd& u1, const MatrixXd& UNm1, const MatrixXd& UN,
                  const Vector* rhs, bool keep_fields) {
  const int N = sys.layout.N, Nh = sys.layout.Nh;
  const int nc = static_cast<int>(u0.cols());
  const double tau = sys.grid.tau, h2 = sys.h * sys.h;
  const double rw = sys.scales.r_weight, jw = sys.scales.j1_weight;
  const SpMat &M = sys.M, &K = sys.K, &Mchi = sys.Mchi;
  if (rhs && nc != 1) throw shape_error("condensed: right-hand side requires a single column");

  SweepOutput out;

  // Backward sweep for U. All levels are kept: the u sweep consumes them
  // through the control term and the Z sweep through the stabilizer rows.
  Levels U(N + 1);
  U[N] = UN;
  U[N - 1] = UNm1;
  for (int n = N - 2; n >= 0; --n) {
    MatrixXd r = (2.0 / tau) * (M * U[n + 1]) - (1.0 / tau) * (M * U[n + 2]);
    if (rhs) r.col(0) += rhs->segment(sys.layout.Z(n), Nh);
    U[n] = W.solve(r);
  }
  Levels KU(N + 1);
  for (int n = 0; n <= N; ++n) KU[n] = K * U[n];

  const double c_tt = jw * h2 / (tau * tau);
  const double c_t = jw * h2 / tau;
  // Stabilizer contribution to U-row m (the gradient of the control
  // regularizer with respect to U^m).
  auto j1_row = [&](int m) {
    MatrixXd r = MatrixXd::Zero(Nh, nc);
    if (m == N) r += jw * h2 * KU[N] + c_tt * (KU[N] - KU[N - 1]);
    if (m == N - 1) r -= c_tt * (KU[N] - KU[N - 1]);
    if (m == 1) r += c_tt * (KU[1] - KU[0]);
    if (m == 0) r -= c_tt * (KU[1] - KU[0]);
    if (m >= 1) r += c_t * (KU[m] - KU[m - 1]);
    if (m <= N - 1) r += c_t * (KU[m] - KU[m + 1]);
    return r;
  };

  // Forward sweep for u. Only the last two levels feed the z sweep.
  Levels u_hist;
  if (keep_fields) {
    u_hist.resize(N + 1);
    u_hist[0] = u0;
    u_hist[1] = u1;
  }
  MatrixXd um2 = u0, um1 = u1;
  for (int n = 2; n <= N; ++n) {
    MatrixXd r = (2.0 / tau) * (M * um1) - (1.0 / tau) * (M * um2) + tau * (Mchi * U[n]);
    if (rhs) r.col(0) += rhs->segment(sys.layout.z(n), Nh);
    MatrixXd un = W.solve(r);
    um2 = std::move(um1);
    um1 = un;
    if (keep_fields) u_hist[n] = std::move(un);
  }
  const MatrixXd &uN = um1, &uNm1 = um2;

  // Backward sweep for the multiplier z. All levels are kept for the Z sweep.
  Levels z(N + 1);
  {
    MatrixXd r = -rw * (K * uN + (1.0 / (tau * tau)) * (M * (uN - uNm1)));
    if (rhs) r.col(0) += rhs->segment(sys.layout.u(N), Nh);
    z[N] = W.solve(r);
  }
  {
    MatrixXd r = (2.0 / tau) * (M * z[N]) - (rw / (tau * tau)) * (M * (uNm1 - uN));
    if (rhs) r.col(0) += rhs->segment(sys.layout.u(N - 1), Nh);
    z[N - 1] = W.solve(r);
  }
  for (int m = N - 2; m >= 2; --m) {
    MatrixXd r = (2.0 / tau) * (M * z[m + 1]) - (1.0 / tau) * (M * z[m + 2]);
    if (rhs) r.col(0) += rhs->segment(sys.layout.u(m), Nh);
    z[m] = W.solve(r);
  }

  // Forward sweep for the multiplier Z.
  Levels Z(N + 1);
  {
    MatrixXd r = -j1_row(0);
    if (rhs) r.col(0) += rhs->segment(sys.layout.U(0), Nh);
    Z[0] = W.solve(r);
  }
  {
    MatrixXd r = (2.0 / tau) * (M * Z[0]) - j1_row(1);
    if (rhs) r.col(0) += rhs->segment(sys.layout.U(1), Nh);
    Z[1] = W.solve(r);
  }
  for (int m = 2; m <= N - 2; ++m) {
    MatrixXd r = (2.0 / tau) * (M * Z[m - 1]) - (1.0 / tau) * (M * Z[m - 2]) +
                 tau * (Mchi * z[m]) - j1_row(m);
    if (rhs) r.col(0) += rhs->segment(sys.layout.U(m), Nh);
    Z[m] = W.solve(r);
  }

  // Closure rows.
  out.F.resize(4 * Nh, nc);
  {
    MatrixXd c0 =
        (1.0 / tau) * (M * z[2]) + rw * (K * u0 + (1.0 / (tau * tau)) * (M * (u0 - u1)));
    if (rhs) c0.col(0) -= rhs->segment(sys.layout.u(0), Nh);
    out.F.block(0, 0, Nh, nc) = c0;
  }
  {
    MatrixXd c1 = -(2.0 / tau) * (M * z[2]) + (1.0 / tau) * (M * z[3]) +
                  (rw / (tau * tau)) * (M * (u1 - u0));
    if (rhs) c1.col(0) -= rhs->segment(sys.layout.u(1), Nh);
    out.F.block(Nh, 0, Nh, nc) = c1;
  }
  {
    MatrixXd c2 = (1.0 / tau) * (M * (Z[N - 3] - 2.0 * Z[N - 2])) - tau * (Mchi * z[N - 1]) +
                  j1_row(N - 1);
    if (rhs) c2.col(0) -= rhs->segment(sys.layout.U(N - 1), Nh);
    out.F.block(2 * Nh, 0, Nh, nc) = c2;
  }
  {
    MatrixXd c3 = (1.0 / tau) * (M * Z[N - 2]) - tau * (Mchi * z[N]) + j1_row(N);
    if (rhs) c3.col(0) -= rhs->segment(sys.layout.U(N), Nh);
    out.F.block(3 * Nh, 0, Nh, nc) = c3;
  }

  if (keep_fields) {
    out.u = std::move(u_hist);
    out.U = std::move(U);
    out.z = std::move(z);
    out.Z = std::move(Z);
  }
  return out;
}

Vector pack_sweep(const SaddleSystem& sys, const SweepOutput& s) {
  const int N = sys.layout.N, Nh = sys.layout.Nh;
  Vector x(sys.layout.total());
  for (int n = 0; n <= N; ++n) {
    x.segment(sys.layout.u(n), Nh) = s.u[n].col(0);
    x.segment(sys.layout.U(n), Nh) = s.U[n].col(0);
  }
  for (int n = 2; n <= N; ++n) x.segment(sys.layout.z(n), Nh) = s.z[n].col(0);
  for (int n = 0; n <= N - 2; ++n) x.segment(sys.layout.Z(n), Nh) = s.Z[n].col(0);
  return x;
}

}  // namespace

Vector condensed_solve(const SaddleSystem& sys, double rel_tol, int max_refine,
                       SolveReport* report) {
  const auto t0 = Clock::now();
  const int Nh = sys.layout.Nh;
  const double tau = sys.grid.tau;
  if (report) *report = SolveReport{"condensed", 0, 0.0, 0.0, 0.0, false};

  Wfact W;
  W.compute(SpMatCol((1.0 / tau) * sys.M + tau * sys.K));
  if (W.info() != Eigen::Success) {
    throw numeric_error("condensed: Cholesky factorization of M/tau + tau*K failed");
  }

  // Dense core on (u^0, u^1, U^{N-1}, U^N): column j is the closure residual
  // of a unit load, built in batches to bound the sweep storage.
  const int core = 4 * Nh;
  MatrixXd S(core, core);
  const int batch = 64;
  for (int g = 0; g < 4; ++g) {
    for (int start = 0; start < Nh; start += batch) {
      const int nc = std::min(batch, Nh - start);
      const MatrixXd zero = MatrixXd::Zero(Nh, nc);
      MatrixXd unit = MatrixXd::Zero(Nh, nc);
      for (int j = 0; j < nc; ++j) unit(start + j, j) = 1.0;
      SweepOutput o = sweep(sys, W, g == 0 ? unit : zero, g == 1 ? unit : zero,
                            g == 2 ? unit : zero, g == 3 ? unit : zero, nullptr, false);
      S.block(0, g * Nh + start, core, nc) = o.F;
    }
  }
  // In-place LU keeps the peak at one dense core copy.
  Eigen::PartialPivLU<Eigen::Ref<MatrixXd>> lu(S);

  const MatrixXd zed = MatrixXd::Zero(Nh, 1);
  auto core_solve = [&](const Vector& rhs) {
    SweepOutput o = sweep(sys, W, zed, zed, zed, zed, &rhs, false);
    const Vector P = lu.solve(Vector(-o.F.col(0)));
    auto blk = [&](int g) { return MatrixXd(P.segment(g * Nh, Nh)); };
    return pack_sweep(sys, sweep(sys, W, blk(0), blk(1), blk(2), blk(3), &rhs, true));
  };

  Vector x = core_solve(sys.b);
  double res = relative_residual(sys.A, x, sys.b);
  int rounds = 0;
  while (res > rel_tol && rounds < max_refine) {
    const Vector r = sys.b - sys.A * x;
    const Vector nx = x + core_solve(r);
    const double next = relative_residual(sys.A, nx, sys.b);
    ++rounds;
    if (next >= res) break;  // refinement stagnated
    x = nx;
    res = next;
  }

  if (report) {
    report->iterations = rounds;
    report->rel_residual = res;
    report->fill_ratio =
        sys.A.nonZeros() > 0 ? double(core) * double(core) / double(sys.A.nonZeros()) : 0.0;
    report->wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    report->converged = res <= rel_tol;
  }
  if (res > rel_tol * 1e3) {
    throw numeric_error("condensed: residual " + std::to_string(res) +
                        " far above tolerance after refinement");
  }
  return x;
}

}  // namespace wavecontrol
