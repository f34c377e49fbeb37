#pragma once

#include <Eigen/Core>
#include <vector>

#include "wavecontrol/errors.hpp"

namespace wavecontrol {

/** Uniform grid on [0, T] with N steps of size tau = T/N. */
struct TimeGrid {
  double T = 1.0;
  int N = 4;
  double tau = 0.25;

  double time(int n) const { return tau * static_cast<double>(n); }
};

/// Validates T > 0, N >= 4 and the tau*N == T closure before returning the grid.
TimeGrid make_time_grid(double T, int N);

/// Step count realizing tau ~= rho * grid_step (nearest integer, at least 4).
int steps_for_ratio(double T, double rho, double grid_step);

/** Time series of nodal coefficient vectors over the inclusive level range
    [first, last]. Levels outside the range do not exist: accessing them is a
    hard error, never an implicit zero. */
struct SpaceTimeField {
  TimeGrid grid;
  int first = 0;
  int last = -1;
  std::vector<Eigen::VectorXd> levels;

  int n_levels() const { return last - first + 1; }
  int n_dofs() const { return levels.empty() ? 0 : static_cast<int>(levels.front().size()); }
  const Eigen::VectorXd& at(int n) const;
  Eigen::VectorXd& at(int n);
};

SpaceTimeField make_field(const TimeGrid& grid, int first, int last, int n_dofs);

// First and second time differences. The backward forms look toward smaller
// levels, the forward forms toward larger ones; note the sign convention
// forward_diff(f, n) = (f^n - f^{n+1}) / tau.
Eigen::VectorXd backward_diff(const SpaceTimeField& f, int n);   // needs n-1, n
Eigen::VectorXd forward_diff(const SpaceTimeField& f, int n);    // needs n, n+1
Eigen::VectorXd backward_diff2(const SpaceTimeField& f, int n);  // needs n-2 .. n
Eigen::VectorXd forward_diff2(const SpaceTimeField& f, int n);   // needs n .. n+2

}  // namespace wavecontrol
