#include "wavecontrol/oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "wavecontrol/cutoff.hpp"
#include "wavecontrol/data.hpp"
#include "wavecontrol/fem.hpp"
#include "wavecontrol/mesh.hpp"
#include "wavecontrol/solver.hpp"

namespace wavecontrol {

namespace {

OracleCheck smaller(std::string name, double value, double threshold) {
  OracleCheck c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = threshold;
  c.larger_is_better = false;
  c.pass = value <= threshold;
  return c;
}

OracleCheck larger(std::string name, double value, double threshold) {
  OracleCheck c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = threshold;
  c.larger_is_better = true;
  c.pass = value > threshold;
  return c;
}

}  // namespace

OracleReport run_oracle_suite(std::uint64_t seed) {
  DomainSpec domain;
  domain.kind = DomainKind::unit_interval;
  domain.target_h = 0.25;  // 3 interior dofs
  const Mesh mesh = build_mesh(domain);
  const FemSpace space = make_space(mesh);
  const Vector chi_vertices = discretize_cutoff(build_cutoff(domain, CutoffSpec{}), mesh);
  const TimeGrid grid = make_time_grid(2.0, 4);

  ProblemData data;
  data.g0 = preset_sine(1, 1, 1, 1.0);
  const SaddleSystem sys = assemble_saddle(space, grid, chi_vertices, data);
  const int total = sys.layout.total();

  OracleReport report;
  report.checks.push_back(smaller("matrix_symmetry", max_asymmetry(sys.A), 1e-12));

  const KernelCheckResult kc = kernel_check(sys);
  report.checks.push_back(larger("kernel_sigma_ratio", kc.ratio, 1e-10));

  SolverOptions opts;
  opts.method = SolverMethod::sparse_direct;
  const Vector x_sparse = solve_saddle(sys, opts);
  const Eigen::MatrixXd dense = Eigen::MatrixXd(sys.A);
  const Vector x_dense = Eigen::PartialPivLU<Eigen::MatrixXd>(dense).solve(sys.b);
  report.checks.push_back(
      smaller("sparse_vs_dense_lu", (x_sparse - x_dense).lpNorm<Eigen::Infinity>(), 1e-10));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double eps = 1e-4;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(total), y(total);
    for (int i = 0; i < total; ++i) x[i] = gauss(rng);
    for (int i = 0; i < total; ++i) y[i] = gauss(rng);
    const double grad = y.dot(sys.A * x - sys.b);
    const double fd = (eval_J(sys, x + eps * y) - eval_J(sys, x - eps * y)) / (2.0 * eps);
    worst = std::max(worst, std::abs(fd - grad) / std::max(std::abs(grad), 1e-30));
  }
  report.checks.push_back(smaller("gradient_central_difference", worst, 1e-8));

  report.pass = true;
  for (const auto& c : report.checks) report.pass = report.pass && c.pass;
  return report;
}

}  // namespace wavecontrol
