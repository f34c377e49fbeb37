// Configuration-driven driver: solve one instance, run a convergence study,
// re-verify a stored solution, run the empirical inf-sup check, or run the
// dense-oracle suite. Exit codes: 0 success, 2 config error, 3 numerical
// failure, 4 check failure.
#include <Eigen/Core>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wavecontrol/analysis.hpp"
#include "wavecontrol/config.hpp"
#include "wavecontrol/io.hpp"
#include "wavecontrol/oracles.hpp"
#include "wavecontrol/study.hpp"

namespace {

using nlohmann::json;
using namespace wavecontrol;

constexpr int kSchemaVersion = 1;

struct CommonArgs {
  std::string config_path;
  std::string out_override;
  std::uint64_t seed = 0x5eedULL;
  bool allow_short_T = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file")->required();
  cmd->add_option("--out", args.out_override, "output directory (overrides the config)");
  cmd->add_option("--seed", args.seed, "random seed, recorded in every report");
  cmd->add_flag("--allow-short-T", args.allow_short_T,
                "accept a horizon below twice the domain diameter");
}

RunConfig load_config(const CommonArgs& args) {
  RunConfig cfg = parse_run_config(read_json_file(args.config_path), args.allow_short_T);
  if (!args.out_override.empty()) cfg.output_dir = args.out_override;
  return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

json base_report(const char* command, const RunConfig& cfg, std::uint64_t seed) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"seed", seed},
          {"config", config_echo(cfg)}};
}

json instance_echo(const Mesh& mesh, const FemSpace& space, const TimeGrid& grid, int total) {
  return {{"h", mesh.grid_step}, {"Nh", space.n_dofs},          {"N", grid.N},
          {"tau", grid.tau},     {"total_unknowns", total}};
}

int cmd_solve(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const Mesh mesh = build_mesh(cfg.domain);
  const FemSpace space = make_space(mesh);
  const Vector chi_vertices = discretize_cutoff(build_cutoff(cfg.domain, cfg.cutoff), mesh);
  const TimeGrid grid = make_time_grid(cfg.T, steps_for_ratio(cfg.T, cfg.rho, mesh.grid_step));
  const SaddleSystem sys = assemble_saddle(space, grid, chi_vertices, cfg.data);

  SolveReport srep;
  const Vector x = solve_saddle(sys, resolve_solver(cfg, sys.layout.total()), &srep);
  const NormReport norms = compute_norms(sys, x);
  const ConsistencyReport cons = consistency_check(sys, x);
  const StateFields fields = extract_state(sys, x);
  const double r_residual = std::sqrt(2.0 * eval_R(sys, fields.u));

  write_state_binary(join(cfg.output_dir, "solution.state"), x);
  write_mesh_text(join(cfg.output_dir, "mesh.txt"), mesh);
  json doc = base_report("solve", cfg, args.seed);
  doc["instance"] = instance_echo(mesh, space, grid, sys.layout.total());
  doc["solver"] = to_json(srep);
  doc["norms"] = to_json(norms);
  doc["consistency"] = to_json(cons);
  doc["controllability_residual"] = r_residual;
  doc["outputs"] = {{"solution", "solution.state"}, {"mesh", "mesh.txt"}};
  write_json_file(join(cfg.output_dir, "solve.json"), doc);

  std::cout << "solve: " << sys.layout.total() << " unknowns via " << srep.method
            << ", rel residual " << srep.rel_residual << ", controllability residual "
            << r_residual << "\n";
  return 0;
}

int cmd_convergence(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const StudyResult res = convergence_study(study_options(cfg));

  write_study_csv(join(cfg.output_dir, "study.csv"), res);
  write_study_gnuplot(join(cfg.output_dir, "plot_study.gp"), "study.csv");
  json doc = base_report("convergence", cfg, args.seed);
  json rows = json::array();
  for (const auto& r : res.rows) rows.push_back(to_json(r));
  doc["rows"] = rows;
  doc["multiplier_monotone"] = res.multiplier_monotone;
  doc["outputs"] = {{"csv", "study.csv"}, {"plot", "plot_study.gp"}};
  write_json_file(join(cfg.output_dir, "convergence.json"), doc);

  for (const auto& r : res.rows) {
    std::cout << "level " << r.level << ": h = " << r.h << ", residual " << r.R_residual
              << ", order " << r.order_R << "\n";
  }
  return 0;
}

int cmd_verify(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const Mesh mesh = build_mesh(cfg.domain);
  const FemSpace space = make_space(mesh);
  const Vector chi_vertices = discretize_cutoff(build_cutoff(cfg.domain, cfg.cutoff), mesh);
  const TimeGrid grid = make_time_grid(cfg.T, steps_for_ratio(cfg.T, cfg.rho, mesh.grid_step));
  const SaddleSystem sys = assemble_saddle(space, grid, chi_vertices, cfg.data);

  const Vector x = read_state_binary(join(cfg.output_dir, "solution.state"));
  if (x.size() != sys.layout.total()) {
    throw config_error("verify: stored solution has " + std::to_string(x.size()) +
                       " unknowns, the config instance has " +
                       std::to_string(sys.layout.total()));
  }
  const ConsistencyReport cons = consistency_check(sys, x);
  json doc = base_report("verify", cfg, args.seed);
  doc["instance"] = instance_echo(mesh, space, grid, sys.layout.total());
  doc["consistency"] = to_json(cons);
  write_json_file(join(cfg.output_dir, "verify.json"), doc);

  std::cout << "verify: forward residual " << cons.max_forward_residual << ", backward residual "
            << cons.max_backward_residual << ", final energy " << cons.final_energy
            << (cons.pass ? " [PASS]" : " [FAIL]") << "\n";
  return cons.pass ? 0 : 4;
}

int cmd_infsup(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const Mesh mesh = build_mesh(cfg.domain);
  const FemSpace space = make_space(mesh);
  const Vector chi_vertices = discretize_cutoff(build_cutoff(cfg.domain, cfg.cutoff), mesh);
  const TimeGrid grid = make_time_grid(cfg.T, steps_for_ratio(cfg.T, cfg.rho, mesh.grid_step));

  const InfSupReport rep = infsup_check(space, grid, chi_vertices, 200, SweepGrid{}, args.seed);
  json doc = base_report("infsup", cfg, args.seed);
  doc["infsup"] = to_json(rep);
  write_json_file(join(cfg.output_dir, "infsup.json"), doc);

  std::cout << "infsup: c_emp = " << rep.c_emp << " at gamma = " << rep.gamma << ", alpha0 = "
            << rep.alpha0 << " over " << rep.trials << " trials"
            << (rep.pass ? " [PASS]" : " [FAIL]") << "\n";
  return rep.pass ? 0 : 4;
}

int cmd_oracle(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const OracleReport rep = run_oracle_suite(args.seed);

  json doc = base_report("oracle", cfg, args.seed);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"larger_is_better", c.larger_is_better},
                      {"pass", c.pass}});
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.value
              << (c.larger_is_better ? " > " : " <= ") << c.threshold << "\n";
  }
  doc["checks"] = checks;
  doc["pass"] = rep.pass;
  write_json_file(join(cfg.output_dir, "oracle.json"), doc);
  return rep.pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("WAVECONTROL_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) {
      std::cerr << "config error: WAVECONTROL_THREADS must be a positive integer\n";
      return 2;
    }
    Eigen::setNbThreads(static_cast<int>(n));
  }

  CLI::App app{"fully discrete interior null controllability of the wave equation"};
  app.require_subcommand(1);
  CommonArgs args;
  CLI::App* solve = app.add_subcommand("solve", "assemble and solve one instance");
  CLI::App* convergence =
      app.add_subcommand("convergence", "nested-mesh convergence study with rate table");
  CLI::App* verify =
      app.add_subcommand("verify", "recheck a stored solution against the wave recursions");
  CLI::App* infsup = app.add_subcommand("infsup", "empirical inf-sup stability check");
  CLI::App* oracle = app.add_subcommand("oracle", "dense-oracle suite on a tiny instance");
  for (CLI::App* cmd : {solve, convergence, verify, infsup, oracle}) add_common(cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(args);
    if (convergence->parsed()) return cmd_convergence(args);
    if (verify->parsed()) return cmd_verify(args);
    if (infsup->parsed()) return cmd_infsup(args);
    return cmd_oracle(args);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
