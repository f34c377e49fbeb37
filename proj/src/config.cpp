#include "wavecontrol/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

#include "wavecontrol/io.hpp"

namespace wavecontrol {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw config_error("config: " + where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) throw config_error("config: unknown key '" + it.key() + "' in " + where);
  }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw config_error("config: " + where + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw config_error("config: " + where + "." + key + " must be finite");
  return x;
}

long get_integer(const json& obj, const char* key, long fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw config_error("config: " + where + "." + key + " must be an integer");
  }
  return v.get<long>();
}

std::string get_string(const json& obj, const char* key, const char* fallback,
                       const std::string& where) {
  if (!obj.contains(key)) {
    if (fallback) return fallback;
    throw config_error("config: " + where + "." + key + " is required");
  }
  const json& v = obj.at(key);
  if (!v.is_string()) throw config_error("config: " + where + "." + key + " must be a string");
  return v.get<std::string>();
}

std::array<double, 2> get_point(const json& obj, const char* key, std::array<double, 2> fallback,
                                const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw config_error("config: " + where + "." + key + " must be [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

DomainSpec parse_domain(const json& j) {
  check_keys(j, "domain", {"kind", "target_h", "radius", "center"});
  DomainSpec d;
  const std::string kind = get_string(j, "kind", nullptr, "domain");
  if (kind == "unit_interval") {
    d.kind = DomainKind::unit_interval;
  } else if (kind == "unit_square") {
    d.kind = DomainKind::unit_square;
  } else if (kind == "disk") {
    d.kind = DomainKind::disk;
  } else {
    throw config_error("config: domain.kind must be unit_interval, unit_square or disk, got '" +
                       kind + "'");
  }
  d.target_h = get_number(j, "target_h", d.target_h, "domain");
  d.radius = get_number(j, "radius", d.radius, "domain");
  d.center = get_point(j, "center", d.center, "domain");
  if (!(d.target_h > 0.0)) throw config_error("config: domain.target_h must be positive");
  if (d.kind == DomainKind::disk && !(d.radius > 0.0)) {
    throw config_error("config: domain.radius must be positive");
  }
  return d;
}

CutoffSpec parse_cutoff(const json& j) {
  check_keys(j, "cutoff", {"kind", "r", "delta", "center", "radius"});
  CutoffSpec c;
  const std::string kind = get_string(j, "kind", "boundary_collar", "cutoff");
  if (kind == "boundary_collar") {
    c.kind = CutoffKind::boundary_collar;
  } else if (kind == "interior_bump") {
    c.kind = CutoffKind::interior_bump;
  } else {
    throw config_error("config: cutoff.kind must be boundary_collar or interior_bump, got '" +
                       kind + "'");
  }
  c.r = get_number(j, "r", c.r, "cutoff");
  c.delta = get_number(j, "delta", c.delta, "cutoff");
  c.center = get_point(j, "center", c.center, "cutoff");
  c.radius = get_number(j, "radius", c.radius, "cutoff");
  return c;
}

Datum parse_datum(const json& j, const DomainSpec& domain, const std::string& which) {
  const int dim = domain.kind == DomainKind::unit_interval ? 1 : 2;
  std::string preset;
  long k = 1, l = 1;
  double amplitude = 1.0;
  if (j.is_string()) {
    preset = j.get<std::string>();
  } else if (j.is_object()) {
    if (j.contains("file")) {
      check_keys(j, which, {"file"});
      return Datum::from_dofs(read_state_binary(j.at("file").get<std::string>()));
    }
    check_keys(j, which, {"preset", "k", "l", "amplitude"});
    preset = get_string(j, "preset", nullptr, which);
    k = get_integer(j, "k", 1, which);
    l = get_integer(j, "l", 1, which);
    amplitude = get_number(j, "amplitude", 1.0, which);
  } else {
    throw config_error("config: " + which + " must be a preset name or an object");
  }
  if (preset == "zero") return Datum::zero();
  if (preset == "sine") {
    if (k < 1 || l < 1 || k > 64 || l > 64) {
      throw config_error("config: " + which + " sine indices must lie in [1, 64]");
    }
    return preset_sine(dim, static_cast<int>(k), static_cast<int>(l), amplitude);
  }
  if (preset == "radial_cosine") {
    if (domain.kind != DomainKind::disk) {
      throw config_error("config: preset radial_cosine needs the disk domain");
    }
    return preset_radial_cosine(domain, amplitude);
  }
  throw config_error("config: unknown preset '" + preset + "' for " + which);
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc, bool allow_short_T) {
  check_keys(doc, "top level",
             {"schema_version", "domain", "time", "cutoff", "data", "solver", "study",
              "output_dir"});
  const long schema = get_integer(doc, "schema_version", 1, "top level");
  if (schema != 1) {
    throw config_error("config: unsupported schema_version " + std::to_string(schema));
  }
  if (!doc.contains("domain")) throw config_error("config: domain is required");

  RunConfig cfg;
  cfg.allow_short_T = allow_short_T;
  cfg.domain = parse_domain(doc.at("domain"));

  if (doc.contains("time")) {
    const json& t = doc.at("time");
    check_keys(t, "time", {"T", "rho"});
    cfg.T = get_number(t, "T", cfg.T, "time");
    cfg.rho = get_number(t, "rho", cfg.rho, "time");
  }
  if (!(cfg.T > 0.0)) throw config_error("config: time.T must be positive");
  if (cfg.rho < 0.25 || cfg.rho > 4.0) {
    throw config_error("config: time.rho must lie in [0.25, 4]");
  }

  if (doc.contains("cutoff")) cfg.cutoff = parse_cutoff(doc.at("cutoff"));
  build_cutoff(cfg.domain, cfg.cutoff);  // geometry validation only

  if (cfg.cutoff.kind == CutoffKind::boundary_collar && !cfg.allow_short_T) {
    const double needed = 2.0 * domain_diameter(cfg.domain);
    if (cfg.T < needed * (1.0 - 1e-12)) {
      throw config_error("config: time.T = " + std::to_string(cfg.T) +
                         " is below twice the domain diameter (" + std::to_string(needed) +
                         "); pass --allow-short-T to run anyway");
    }
  }

  if (doc.contains("data")) {
    const json& d = doc.at("data");
    check_keys(d, "data", {"g0", "g1"});
    if (d.contains("g0")) cfg.data.g0 = parse_datum(d.at("g0"), cfg.domain, "data.g0");
    if (d.contains("g1")) cfg.data.g1 = parse_datum(d.at("g1"), cfg.domain, "data.g1");
  }
  if (!cfg.data.g0.is_zero && !cfg.data.g0.nodal.has_value()) {
    const double trace = boundary_trace_max(cfg.data.g0, cfg.domain);
    if (trace > 1e-9) {
      throw config_error("config: data.g0 must vanish on the boundary (max trace " +
                         std::to_string(trace) + ")");
    }
  }

  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    check_keys(s, "solver",
               {"method", "rel_tol", "max_iterations", "pivot_threshold", "direct_dof_limit"});
    const std::string m = get_string(s, "method", "auto", "solver");
    if (m == "auto") {
      cfg.solver_auto = true;
    } else if (m == "sparse_direct") {
      cfg.solver_auto = false;
      cfg.solver.method = SolverMethod::sparse_direct;
    } else if (m == "minres") {
      cfg.solver_auto = false;
      cfg.solver.method = SolverMethod::minres;
    } else if (m == "condensed") {
      cfg.solver_auto = false;
      cfg.solver.method = SolverMethod::condensed;
    } else {
      throw config_error(
          "config: solver.method must be auto, sparse_direct, minres or condensed, got '" + m +
          "'");
    }
    cfg.solver.rel_tol = get_number(s, "rel_tol", cfg.solver.rel_tol, "solver");
    cfg.solver.max_iterations = static_cast<int>(
        get_integer(s, "max_iterations", cfg.solver.max_iterations, "solver"));
    cfg.solver.pivot_threshold =
        get_number(s, "pivot_threshold", cfg.solver.pivot_threshold, "solver");
    cfg.direct_dof_limit = get_integer(s, "direct_dof_limit", cfg.direct_dof_limit, "solver");
    if (!(cfg.solver.rel_tol > 0.0) || cfg.solver.rel_tol > 1e-4) {
      throw config_error("config: solver.rel_tol must lie in (0, 1e-4]");
    }
    if (cfg.solver.max_iterations < 1) {
      throw config_error("config: solver.max_iterations must be at least 1");
    }
    if (!(cfg.solver.pivot_threshold > 0.0) || cfg.solver.pivot_threshold > 1.0) {
      throw config_error("config: solver.pivot_threshold must lie in (0, 1]");
    }
    if (cfg.direct_dof_limit < 0) {
      throw config_error("config: solver.direct_dof_limit must be nonnegative");
    }
  }

  if (doc.contains("study")) {
    const json& s = doc.at("study");
    check_keys(s, "study", {"levels", "base_h"});
    cfg.study_levels = static_cast<int>(get_integer(s, "levels", cfg.study_levels, "study"));
    cfg.study_base_h = get_number(s, "base_h", 0.0, "study");
    if (cfg.study_levels < 1) throw config_error("config: study.levels must be at least 1");
    if (s.contains("base_h") && !(cfg.study_base_h > 0.0)) {
      throw config_error("config: study.base_h must be positive");
    }
  }

  if (doc.contains("output_dir")) {
    cfg.output_dir = get_string(doc, "output_dir", nullptr, "top level");
    if (cfg.output_dir.empty()) throw config_error("config: output_dir must not be empty");
  }
  return cfg;
}

SolverOptions resolve_solver(const RunConfig& cfg, long total_dofs) {
  SolverOptions opts = cfg.solver;
  if (cfg.solver_auto) {
    opts.method = total_dofs <= cfg.direct_dof_limit ? SolverMethod::sparse_direct
                                                     : SolverMethod::condensed;
  }
  return opts;
}

StudyOptions study_options(const RunConfig& cfg) {
  StudyOptions opts;
  opts.domain = cfg.domain;
  if (cfg.study_base_h > 0.0) opts.domain.target_h = cfg.study_base_h;
  opts.cutoff = cfg.cutoff;
  opts.data = cfg.data;
  opts.T = cfg.T;
  opts.rho = cfg.rho;
  opts.levels = cfg.study_levels;
  opts.solver = cfg.solver;
  opts.direct_dof_limit = static_cast<int>(
      std::min<long>(cfg.direct_dof_limit, std::numeric_limits<int>::max()));
  return opts;
}

namespace {

std::string domain_kind_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::unit_interval: return "unit_interval";
    case DomainKind::unit_square: return "unit_square";
    case DomainKind::disk: return "disk";
  }
  return "unknown";
}

std::string method_name(const RunConfig& cfg) {
  if (cfg.solver_auto) return "auto";
  switch (cfg.solver.method) {
    case SolverMethod::sparse_direct: return "sparse_direct";
    case SolverMethod::minres: return "minres";
    case SolverMethod::condensed: return "condensed";
  }
  return "unknown";
}

}  // namespace

nlohmann::json config_echo(const RunConfig& cfg) {
  json domain = {{"kind", domain_kind_name(cfg.domain.kind)},
                 {"target_h", cfg.domain.target_h}};
  if (cfg.domain.kind == DomainKind::disk) {
    domain["radius"] = cfg.domain.radius;
    domain["center"] = {cfg.domain.center[0], cfg.domain.center[1]};
  }
  json cutoff = {{"kind", cfg.cutoff.kind == CutoffKind::boundary_collar ? "boundary_collar"
                                                                         : "interior_bump"},
                 {"r", cfg.cutoff.r},
                 {"delta", cfg.cutoff.delta}};
  if (cfg.cutoff.kind == CutoffKind::interior_bump) {
    cutoff["center"] = {cfg.cutoff.center[0], cfg.cutoff.center[1]};
    cutoff["radius"] = cfg.cutoff.radius;
  }
  return {{"domain", domain},
          {"time", {{"T", cfg.T}, {"rho", cfg.rho}}},
          {"cutoff", cutoff},
          {"data", {{"g0", cfg.data.g0.name}, {"g1", cfg.data.g1.name}}},
          {"solver",
           {{"method", method_name(cfg)},
            {"rel_tol", cfg.solver.rel_tol},
            {"max_iterations", cfg.solver.max_iterations},
            {"pivot_threshold", cfg.solver.pivot_threshold},
            {"direct_dof_limit", cfg.direct_dof_limit}}},
          {"study", {{"levels", cfg.study_levels}, {"base_h", cfg.study_base_h}}},
          {"output_dir", cfg.output_dir},
          {"allow_short_T", cfg.allow_short_T}};
}

}  // namespace wavecontrol
