#pragma once

#include <string>
#include <vector>

#include "wavecontrol/analysis.hpp"
#include "wavecontrol/cutoff.hpp"
#include "wavecontrol/solver.hpp"

namespace wavecontrol {

struct StudyOptions {
  DomainSpec domain;
  CutoffSpec cutoff;
  ProblemData data;
  double T = 3.0;
  double rho = 1.0;  // tau / structural grid step at every level
  int levels = 3;
  SolverOptions solver;          // tolerances forwarded to each level's solve
  int direct_dof_limit = 60000;  // above this many dofs the condensed path is used
};

/** One refinement level of the study. Self-convergence columns live on the
    coarse row of each level pair and are zero on the finest row; order
    columns are log2 ratios against the previous row and zero where
    undefined. */
struct StudyRow {
  int level = 0;
  double h = 0.0;
  double tau = 0.0;
  int N = 0;
  int Nh = 0;
  long dofs = 0;
  double R_residual = 0.0;  // sqrt(2 R(u_h)), the controllability residual
  double zD = 0.0;
  double ZDprime = 0.0;
  double self_err_state_H1 = 0.0;     // max_n of the H1 x L2 pairing vs next level
  double self_err_control_L2 = 0.0;   // max_n L2 difference of the controls
  double self_err_control_Hm1 = 0.0;  // max_n discrete H^-1 difference of their rates
  double order_R = 0.0;
  double order_multiplier = 0.0;  // of zD + ZDprime
  double order_state_H1 = 0.0;
  double order_control_L2 = 0.0;
  double order_control_Hm1 = 0.0;
  double wall_seconds = 0.0;
  // Diagnostics carried alongside the table.
  double max_forward_residual = 0.0;
  double max_backward_residual = 0.0;
  bool energy_monotone = false;
  std::string solver_method;
  double solver_rel_residual = 0.0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  bool multiplier_monotone = false;  // zD + ZDprime strictly decreasing over levels
};

/** Nested convergence study: level l uses the l-times uniformly refined base
    mesh and N = N0 * 2^l time steps, solves the coupled system, and records
    the controllability residual, multiplier norms, and self-convergence
    errors against the next finer level (prolongation in space, index
    doubling in time). */
StudyResult convergence_study(const StudyOptions& opts);

}  // namespace wavecontrol
