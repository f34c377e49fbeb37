#include "wavecontrol/io.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace wavecontrol {

namespace {

void ensure_parent(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  ensure_parent(path);
  std::ofstream out(path, mode);
  if (!out) throw config_error("io: cannot open for writing: " + path);
  return out;
}

std::string domain_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::unit_interval: return "unit_interval";
    case DomainKind::unit_square: return "unit_square";
    case DomainKind::disk: return "disk";
  }
  throw config_error("io: unknown domain kind");
}

DomainKind domain_from_name(const std::string& name) {
  if (name == "unit_interval") return DomainKind::unit_interval;
  if (name == "unit_square") return DomainKind::unit_square;
  if (name == "disk") return DomainKind::disk;
  throw config_error("io: unknown domain name '" + name + "'");
}

std::string fmt(double v, int digits = 12) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw config_error("io: short write: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("io: cannot open: " + path);
  try {
    nlohmann::json doc;
    in >> doc;
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("io: malformed JSON in " + path + ": " + e.what());
  }
}

void write_mesh_text(const std::string& path, const Mesh& mesh) {
  auto out = open_out(path);
  out << mesh.dim << ' ' << mesh.n_vertices() << ' ' << mesh.n_cells() << '\n';
  out << domain_name(mesh.domain.kind) << ' ' << fmt(mesh.domain.target_h, 17) << ' '
      << fmt(mesh.domain.radius, 17) << ' ' << fmt(mesh.domain.center[0], 17) << ' '
      << fmt(mesh.domain.center[1], 17) << ' ' << fmt(mesh.grid_step, 17) << ' '
      << mesh.refinement_level << '\n';
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << '\n';
  for (const auto& c : mesh.cells) out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  if (!out) throw config_error("io: short write: " + path);
}

Mesh read_mesh_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("io: cannot open: " + path);
  Mesh mesh;
  int nv = 0, nc = 0;
  std::string kind;
  if (!(in >> mesh.dim >> nv >> nc)) throw config_error("io: bad mesh header in " + path);
  if ((mesh.dim != 1 && mesh.dim != 2) || nv < 2 || nc < 1) {
    throw config_error("io: implausible mesh header in " + path);
  }
  if (!(in >> kind >> mesh.domain.target_h >> mesh.domain.radius >> mesh.domain.center[0] >>
        mesh.domain.center[1] >> mesh.grid_step >> mesh.refinement_level)) {
    throw config_error("io: bad mesh domain line in " + path);
  }
  mesh.domain.kind = domain_from_name(kind);
  mesh.vertices.resize(static_cast<std::size_t>(nv));
  for (auto& v : mesh.vertices) {
    if (!(in >> v[0] >> v[1])) throw config_error("io: truncated vertex list in " + path);
  }
  mesh.cells.resize(static_cast<std::size_t>(nc));
  for (auto& c : mesh.cells) {
    if (!(in >> c[0] >> c[1] >> c[2])) throw config_error("io: truncated cell list in " + path);
    const int last = mesh.dim == 1 ? 1 : 2;
    for (int k = 0; k <= last; ++k) {
      if (c[k] < 0 || c[k] >= nv) throw config_error("io: cell index out of range in " + path);
    }
    if (mesh.dim == 1 && c[2] != -1) {
      throw config_error("io: 1D cells must carry -1 in the third slot: " + path);
    }
  }
  // Euler characteristic of a simply connected complex.
  if (mesh.dim == 1) {
    if (nv - nc != 1) throw config_error("io: mesh fails the Euler check: " + path);
  } else {
    const long long euler = static_cast<long long>(nv) -
                            static_cast<long long>(count_edges(mesh)) +
                            static_cast<long long>(nc);
    if (euler != 1) throw config_error("io: mesh fails the Euler check: " + path);
  }
  rebuild_derived(mesh);
  return mesh;
}

void write_matrix_coordinate(const std::string& path, const SpMat& A) {
  auto out = open_out(path);
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  if (!out) throw config_error("io: short write: " + path);
}

namespace {
constexpr char kStateMagic[6] = {'W', 'C', 'S', 'V', '1', '\n'};
}

void write_state_binary(const std::string& path, const Vector& x) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out.write(kStateMagic, sizeof(kStateMagic));
  const std::int64_t n = x.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(x.data()), static_cast<std::streamsize>(n * 8));
  if (!out) throw config_error("io: short write: " + path);
}

Vector read_state_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("io: cannot open: " + path);
  char magic[sizeof(kStateMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kStateMagic, sizeof(magic)) != 0) {
    throw config_error("io: not a state vector file: " + path);
  }
  std::int64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in || n < 0 || n > (1LL << 40)) throw config_error("io: bad state length in " + path);
  Vector x(n);
  in.read(reinterpret_cast<char*>(x.data()), static_cast<std::streamsize>(n * 8));
  if (!in) throw config_error("io: truncated state payload in " + path);
  return x;
}

void write_study_csv(const std::string& path, const StudyResult& result) {
  auto out = open_out(path);
  out << "level,h,tau,N,Nh,dofs,R_residual,zD,ZDprime,self_err_state_H1,"
         "self_err_control_L2,self_err_control_Hm1,order_R,order_multiplier,"
         "order_state_H1,order_control_L2,order_control_Hm1,wall_seconds\n";
  for (const auto& r : result.rows) {
    out << r.level << ',' << fmt(r.h) << ',' << fmt(r.tau) << ',' << r.N << ',' << r.Nh << ','
        << r.dofs << ',' << fmt(r.R_residual) << ',' << fmt(r.zD) << ',' << fmt(r.ZDprime)
        << ',' << fmt(r.self_err_state_H1) << ',' << fmt(r.self_err_control_L2) << ','
        << fmt(r.self_err_control_Hm1) << ',' << fmt(r.order_R) << ','
        << fmt(r.order_multiplier) << ',' << fmt(r.order_state_H1) << ','
        << fmt(r.order_control_L2) << ',' << fmt(r.order_control_Hm1) << ','
        << fmt(r.wall_seconds) << '\n';
  }
  if (!out) throw config_error("io: short write: " + path);
}

void write_study_gnuplot(const std::string& path, const std::string& csv_name) {
  auto out = open_out(path);
  out << "set datafile separator ','\n"
         "set terminal pngcairo size 960,640\n"
         "set output 'convergence.png'\n"
         "set xlabel 'refinement level'\n"
         "set ylabel 'log2(quantity)'\n"
         "set key outside right\n"
         "lg(x) = (x > 0 ? log(x)/log(2) : 1/0)\n"
         "plot '"
      << csv_name
      << "' every ::1 using 1:(lg($7)) with linespoints title 'controllability residual', \\\n"
         "     '' every ::1 using 1:(lg($8+$9)) with linespoints title 'multiplier norms', \\\n"
         "     '' every ::1 using 1:(lg($10)) with linespoints title 'state self-error', \\\n"
         "     '' every ::1 using 1:(lg($11)) with linespoints title 'control self-error L2', \\\n"
         "     '' every ::1 using 1:(lg($12)) with linespoints title 'control self-error H-1'\n";
  if (!out) throw config_error("io: short write: " + path);
}

nlohmann::json to_json(const NormReport& r) {
  return {{"R", r.R},     {"F", r.F},           {"Fprime", r.Fprime}, {"D", r.D},
          {"Dprime", r.Dprime}, {"C", r.C},     {"S", r.S}};
}

nlohmann::json to_json(const SolveReport& r) {
  return {{"method", r.method},
          {"iterations", r.iterations},
          {"rel_residual", r.rel_residual},
          {"fill_ratio", r.fill_ratio},
          {"wall_seconds", r.wall_seconds},
          {"converged", r.converged}};
}

nlohmann::json to_json(const InfSupReport& r) {
  return {{"gamma", r.gamma}, {"alpha0", r.alpha0}, {"c_emp", r.c_emp},
          {"trials", r.trials}, {"h", r.h},         {"tau", r.tau},
          {"N", r.N},           {"Nh", r.Nh},       {"seed", r.seed},
          {"pass", r.pass}};
}

nlohmann::json to_json(const ConsistencyReport& r) {
  return {{"max_forward_residual", r.max_forward_residual},
          {"max_backward_residual", r.max_backward_residual},
          {"energy_monotone", r.energy_monotone},
          {"final_energy", r.final_energy},
          {"pass", r.pass}};
}

nlohmann::json to_json(const StudyRow& r) {
  return {{"level", r.level},
          {"h", r.h},
          {"tau", r.tau},
          {"N", r.N},
          {"Nh", r.Nh},
          {"dofs", r.dofs},
          {"R_residual", r.R_residual},
          {"zD", r.zD},
          {"ZDprime", r.ZDprime},
          {"self_err_state_H1", r.self_err_state_H1},
          {"self_err_control_L2", r.self_err_control_L2},
          {"self_err_control_Hm1", r.self_err_control_Hm1},
          {"order_R", r.order_R},
          {"order_multiplier", r.order_multiplier},
          {"order_state_H1", r.order_state_H1},
          {"order_control_L2", r.order_control_L2},
          {"order_control_Hm1", r.order_control_Hm1},
          {"wall_seconds", r.wall_seconds},
          {"max_forward_residual", r.max_forward_residual},
          {"max_backward_residual", r.max_backward_residual},
          {"energy_monotone", r.energy_monotone},
          {"solver_method", r.solver_method},
          {"solver_rel_residual", r.solver_rel_residual}};
}

}  // namespace wavecontrol
