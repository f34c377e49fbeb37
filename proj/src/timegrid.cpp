#include "wavecontrol/timegrid.hpp"

#include <cmath>

namespace wavecontrol {

TimeGrid make_time_grid(double T, int N) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw config_error("time grid: T must be positive and finite, got " + std::to_string(T));
  }
  if (N < 4) {
    throw config_error("time grid: N must be at least 4, got " + std::to_string(N));
  }
  TimeGrid g;
  g.T = T;
  g.N = N;
  g.tau = T / static_cast<double>(N);
  if (std::abs(g.tau * static_cast<double>(N) - T) > 1e-14 * T) {
    throw numeric_error("time grid: tau*N does not reproduce T to 1e-14 relative");
  }
  return g;
}

int steps_for_ratio(double T, double rho, double grid_step) {
  if (!(T > 0.0) || !(rho > 0.0) || !(grid_step > 0.0)) {
    throw config_error("time grid: T, rho and grid step must all be positive");
  }
  return std::max<int>(4, static_cast<int>(std::lround(T / (rho * grid_step))));
}

const Eigen::VectorXd& SpaceTimeField::at(int n) const {
  if (n < first || n > last) {
    throw shape_error("time level " + std::to_string(n) + " outside stored range [" +
                      std::to_string(first) + ", " + std::to_string(last) + "]");
  }
  return levels[static_cast<std::size_t>(n - first)];
}

Eigen::VectorXd& SpaceTimeField::at(int n) {
  if (n < first || n > last) {
    throw shape_error("time level " + std::to_string(n) + " outside stored range [" +
                      std::to_string(first) + ", " + std::to_string(last) + "]");
  }
  return levels[static_cast<std::size_t>(n - first)];
}

SpaceTimeField make_field(const TimeGrid& grid, int first, int last, int n_dofs) {
  if (last < first) throw shape_error("space-time field: empty level range");
  if (first < 0 || last > grid.N) {
    throw shape_error("space-time field: level range [" + std::to_string(first) + ", " +
                      std::to_string(last) + "] exceeds grid levels [0, " +
                      std::to_string(grid.N) + "]");
  }
  if (n_dofs <= 0) throw shape_error("space-time field: n_dofs must be positive");
  SpaceTimeField f;
  f.grid = grid;
  f.first = first;
  f.last = last;
  f.levels.assign(static_cast<std::size_t>(last - first + 1), Eigen::VectorXd::Zero(n_dofs));
  return f;
}

Eigen::VectorXd backward_diff(const SpaceTimeField& f, int n) {
  return (f.at(n) - f.at(n - 1)) / f.grid.tau;
}

Eigen::VectorXd forward_diff(const SpaceTimeField& f, int n) {
  return (f.at(n) - f.at(n + 1)) / f.grid.tau;
}

Eigen::VectorXd backward_diff2(const SpaceTimeField& f, int n) {
  return (f.at(n) - 2.0 * f.at(n - 1) + f.at(n - 2)) / (f.grid.tau * f.grid.tau);
}

Eigen::VectorXd forward_diff2(const SpaceTimeField& f, int n) {
  return (f.at(n) - 2.0 * f.at(n + 1) + f.at(n + 2)) / (f.grid.tau * f.grid.tau);
}

}  // namespace wavecontrol
