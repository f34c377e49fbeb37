#pragma once

#include <string>

#include "json.hpp"
#include "wavecontrol/cutoff.hpp"
#include "wavecontrol/data.hpp"
#include "wavecontrol/mesh.hpp"
#include "wavecontrol/solver.hpp"
#include "wavecontrol/study.hpp"

namespace wavecontrol {

/** One run description, parsed from a single JSON document. `solver_auto`
    mirrors method "auto": pick the sparse direct solver up to
    `direct_dof_limit` unknowns and the condensed solver beyond. */
struct RunConfig {
  DomainSpec domain;
  double T = 3.0;
  double rho = 1.0;  // tau / structural grid step
  CutoffSpec cutoff;
  ProblemData data;
  SolverOptions solver;
  bool solver_auto = true;
  long direct_dof_limit = 60000;
  int study_levels = 3;
  double study_base_h = 0.0;  // 0 = use domain.target_h
  std::string output_dir = "out";
  bool allow_short_T = false;
};

/** Parse and validate a config document. Unknown keys, bad enum names,
    out-of-range values, a cutoff region that does not fit the domain, a
    non-vanishing boundary trace of g0, and a horizon shorter than twice the
    domain diameter for a boundary collar (unless `allow_short_T`) are all
    config errors. */
RunConfig parse_run_config(const nlohmann::json& doc, bool allow_short_T = false);

/// Solver options with "auto" resolved against the actual unknown count.
SolverOptions resolve_solver(const RunConfig& cfg, long total_dofs);

/// Study options implied by the config.
StudyOptions study_options(const RunConfig& cfg);

/// Normalized echo of the parsed config, embedded in every report.
nlohmann::json config_echo(const RunConfig& cfg);

}  // namespace wavecontrol
