#include "wavecontrol/study.hpp"

#include <Eigen/SparseCholesky>
#include <chrono>
#include <cmath>
#include <memory>
#include <utility>

namespace wavecontrol {

namespace {

using SpMatCol = Eigen::SparseMatrix<double>;
using Clock = std::chrono::steady_clock;

double log2_ratio(double coarse, double fine) {
  if (!(coarse > 0.0) || !(fine > 0.0)) return 0.0;
  return std::log2(coarse / fine);
}

long double ldot(const Vector& a, const Vector& b) {
  long double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    acc += static_cast<long double>(a(i)) * static_cast<long double>(b(i));
  }
  return acc;
}

double norm_in(const SpMat& A, const Vector& v) {
  return std::sqrt(std::max<long double>(0.0, ldot(v, A * v)));
}

}  // namespace

StudyResult convergence_study(const StudyOptions& opts) {
  if (opts.levels < 3) throw config_error("study: at least 3 nested levels are required");
  if (opts.rho < 0.25 || opts.rho > 4.0) {
    throw config_error("study: rho outside [0.25, 4]");
  }

  std::vector<std::unique_ptr<Mesh>> meshes;
  std::vector<VertexParents> parents(opts.levels);
  meshes.push_back(std::make_unique<Mesh>(build_mesh(opts.domain)));
  for (int l = 1; l < opts.levels; ++l) {
    meshes.push_back(std::make_unique<Mesh>(refine(*meshes[l - 1], parents[l])));
  }

  const int N0 = steps_for_ratio(opts.T, opts.rho, meshes[0]->grid_step);
  const CutoffFn chi = build_cutoff(opts.domain, opts.cutoff);

  StudyResult out;
  StateFields prev_fields;
  FemSpace prev_space;
  bool have_prev = false;

  for (int l = 0; l < opts.levels; ++l) {
    const auto t0 = Clock::now();
    const Mesh& mesh = *meshes[l];
    FemSpace space = make_space(mesh);
    const Vector chi_vertices = discretize_cutoff(chi, mesh);
    const TimeGrid grid = make_time_grid(opts.T, N0 << l);
    SaddleSystem sys = assemble_saddle(space, grid, chi_vertices, opts.data);

    SolverOptions sopts = opts.solver;
    sopts.method = sys.layout.total() <= opts.direct_dof_limit ? SolverMethod::sparse_direct
                                                               : SolverMethod::condensed;
    SolveReport srep;
    const Vector x = solve_saddle(sys, sopts, &srep);
    const NormReport norms = compute_norms(sys, x);
    const ConsistencyReport cons = consistency_check(sys, x);
    StateFields fields = extract_state(sys, x);

    StudyRow row;
    row.level = l;
    row.h = mesh.h;
    row.tau = grid.tau;
    row.N = grid.N;
    row.Nh = space.n_dofs;
    row.dofs = sys.layout.total();
    row.R_residual = std::sqrt(2.0 * eval_R(sys, fields.u));
    row.zD = norms.D;
    row.ZDprime = norms.Dprime;
    row.max_forward_residual = cons.max_forward_residual;
    row.max_backward_residual = cons.max_backward_residual;
    row.energy_monotone = cons.energy_monotone;
    row.solver_method = srep.method;
    row.solver_rel_residual = srep.rel_residual;

    if (have_prev) {
      // Pair errors between the previous (coarse) and current (fine) level:
      // prolongate coarse levels, compare at doubled time indices, take the
      // max over n = 1..N_coarse as in the per-level error statements.
      const SpMat P = prolongation_matrix(prev_space, space, parents[l]);
      Eigen::SimplicialLLT<SpMatCol> Kllt;
      Kllt.compute(SpMatCol(sys.K));
      if (Kllt.info() != Eigen::Success) {
        throw numeric_error("study: fine stiffness factorization failed");
      }
      double e_state = 0.0, e_l2 = 0.0, e_hm1 = 0.0;
      const int Nc = grid.N / 2;
      for (int n = 1; n <= Nc; ++n) {
        const Vector du = P * prev_fields.u.at(n) - fields.u.at(2 * n);
        const Vector drate = P * backward_diff(prev_fields.u, n) - backward_diff(fields.u, 2 * n);
        const double h1 = std::sqrt(std::max<long double>(
            0.0, ldot(du, sys.K * du) + ldot(du, sys.M * du)));
        e_state = std::max(e_state, h1 + norm_in(sys.M, drate));

        const Vector dU = P * prev_fields.U.at(n) - fields.U.at(2 * n);
        const Vector dUrate = P * backward_diff(prev_fields.U, n) - backward_diff(fields.U, 2 * n);
        e_l2 = std::max(e_l2, norm_in(sys.M, dU));
        const Vector Mr = sys.M * dUrate;
        const double hm1 = std::sqrt(std::max<long double>(0.0, ldot(Mr, Kllt.solve(Mr))));
        e_hm1 = std::max(e_hm1, hm1);
      }
      out.rows[l - 1].self_err_state_H1 = e_state;
      out.rows[l - 1].self_err_control_L2 = e_l2;
      out.rows[l - 1].self_err_control_Hm1 = e_hm1;
    }

    row.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.rows.push_back(std::move(row));
    prev_fields = std::move(fields);
    prev_space = std::move(space);
    have_prev = true;
  }

  out.multiplier_monotone = true;
  for (std::size_t l = 1; l < out.rows.size(); ++l) {
    const double prev = out.rows[l - 1].zD + out.rows[l - 1].ZDprime;
    const double cur = out.rows[l].zD + out.rows[l].ZDprime;
    if (!(cur < prev)) out.multiplier_monotone = false;
    out.rows[l].order_R = log2_ratio(out.rows[l - 1].R_residual, out.rows[l].R_residual);
    out.rows[l].order_multiplier = log2_ratio(prev, cur);
  }
  for (std::size_t p = 1; p + 1 < out.rows.size(); ++p) {
    out.rows[p].order_state_H1 =
        log2_ratio(out.rows[p - 1].self_err_state_H1, out.rows[p].self_err_state_H1);
    out.rows[p].order_control_L2 =
        log2_ratio(out.rows[p - 1].self_err_control_L2, out.rows[p].self_err_control_L2);
    out.rows[p].order_control_Hm1 =
        log2_ratio(out.rows[p - 1].self_err_control_Hm1, out.rows[p].self_err_control_Hm1);
  }
  return out;
}

}  // namespace wavecontrol
