#include "wavecontrol/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace wavecontrol {

namespace {

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

int steps_from_target(double target_h) {
  if (!(target_h > 0.0) || target_h > 1.0) {
    throw config_error("mesh: target_h must lie in (0, 1], got " + std::to_string(target_h));
  }
  int m = static_cast<int>(std::ceil(1.0 / target_h - 1e-12));
  return std::max(m, 2);  // at least one interior vertex
}

void finalize_metrics(Mesh& mesh) {
  mesh.h_cell.resize(mesh.cells.size());
  mesh.h = 0.0;
  mesh.h_min = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells[static_cast<std::size_t>(c)];
    double d = 0.0;
    if (mesh.dim == 1) {
      d = dist(mesh.vertices[cell[0]], mesh.vertices[cell[1]]);
    } else {
      d = std::max({dist(mesh.vertices[cell[0]], mesh.vertices[cell[1]]),
                    dist(mesh.vertices[cell[1]], mesh.vertices[cell[2]]),
                    dist(mesh.vertices[cell[2]], mesh.vertices[cell[0]])});
    }
    mesh.h_cell[static_cast<std::size_t>(c)] = d;
    mesh.h = std::max(mesh.h, d);
    mesh.h_min = (c == 0) ? d : std::min(mesh.h_min, d);
    if (mesh.cell_measure(c) <= 0.0) {
      throw shape_error("mesh: degenerate or misoriented cell " + std::to_string(c));
    }
  }
}

void rebuild_boundary(Mesh& mesh) {
  mesh.vertex_on_boundary.assign(static_cast<std::size_t>(mesh.n_vertices()), 0);
  for (const auto& e : boundary_edges(mesh)) {
    mesh.vertex_on_boundary[static_cast<std::size_t>(e.first)] = 1;
    mesh.vertex_on_boundary[static_cast<std::size_t>(e.second)] = 1;
  }
  mesh.boundary_vertices.clear();
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (mesh.vertex_on_boundary[static_cast<std::size_t>(v)]) mesh.boundary_vertices.push_back(v);
  }
}

Mesh build_interval(const DomainSpec& spec) {
  const int m = steps_from_target(spec.target_h);
  Mesh mesh;
  mesh.dim = 1;
  mesh.domain = spec;
  mesh.grid_step = 1.0 / m;
  mesh.vertices.resize(static_cast<std::size_t>(m + 1));
  for (int i = 0; i <= m; ++i) mesh.vertices[static_cast<std::size_t>(i)] = {double(i) / m, 0.0};
  mesh.cells.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) mesh.cells[static_cast<std::size_t>(i)] = {i, i + 1, -1};
  rebuild_boundary(mesh);
  finalize_metrics(mesh);
  return mesh;
}

Mesh build_square(const DomainSpec& spec) {
  const int m = steps_from_target(spec.target_h);
  Mesh mesh;
  mesh.dim = 2;
  mesh.domain = spec;
  mesh.grid_step = 1.0 / m;
  const auto vid = [m](int i, int j) { return j * (m + 1) + i; };
  mesh.vertices.resize(static_cast<std::size_t>((m + 1) * (m + 1)));
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      mesh.vertices[static_cast<std::size_t>(vid(i, j))] = {double(i) / m, double(j) / m};
    }
  }
  // Uniform diagonal direction; gives the classical 5-point stiffness stencil.
  mesh.cells.reserve(static_cast<std::size_t>(2 * m * m));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  rebuild_boundary(mesh);
  finalize_metrics(mesh);
  return mesh;
}

Mesh build_disk(const DomainSpec& spec) {
  if (!(spec.radius > 0.0)) throw config_error("mesh: disk radius must be positive");
  if (!(spec.target_h > 0.0) || spec.target_h > 2.0 * spec.radius) {
    throw config_error("mesh: disk target_h must lie in (0, 2R]");
  }
  Mesh mesh;
  mesh.dim = 2;
  mesh.domain = spec;
  const int n0 = 8;
  mesh.vertices.push_back({spec.center[0], spec.center[1]});
  for (int k = 0; k < n0; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n0;
    mesh.vertices.push_back({spec.center[0] + spec.radius * std::cos(a),
                             spec.center[1] + spec.radius * std::sin(a)});
  }
  for (int k = 0; k < n0; ++k) {
    mesh.cells.push_back({0, 1 + k, 1 + (k + 1) % n0});
  }
  rebuild_boundary(mesh);
  finalize_metrics(mesh);
  // Refine until the boundary chord (which drives the O(h^2) geometry error)
  // is no longer than target_h.
  auto chord = [&](const Mesh& msh) {
    double c = 0.0;
    for (const auto& e : boundary_edges(msh)) {
      c = std::max(c, dist(msh.vertices[static_cast<std::size_t>(e.first)],
                           msh.vertices[static_cast<std::size_t>(e.second)]));
    }
    return c;
  };
  while (chord(mesh) > spec.target_h) {
    mesh = refine(mesh);
    if (mesh.n_vertices() > 4'000'000) {
      throw config_error("mesh: disk target_h too small for this builder");
    }
  }
  mesh.grid_step = chord(mesh);
  mesh.refinement_level = 0;
  return mesh;
}

}  // namespace

double domain_diameter(const DomainSpec& d) {
  switch (d.kind) {
    case DomainKind::unit_interval: return 1.0;
    case DomainKind::unit_square: return std::numbers::sqrt2;
    case DomainKind::disk: return 2.0 * d.radius;
  }
  throw config_error("mesh: unknown domain kind");
}

double domain_inradius(const DomainSpec& d) {
  switch (d.kind) {
    case DomainKind::unit_interval: return 0.5;
    case DomainKind::unit_square: return 0.5;
    case DomainKind::disk: return d.radius;
  }
  throw config_error("mesh: unknown domain kind");
}

double distance_to_boundary(const DomainSpec& d, double x, double y) {
  switch (d.kind) {
    case DomainKind::unit_interval: return std::min(x, 1.0 - x);
    case DomainKind::unit_square: return std::min({x, 1.0 - x, y, 1.0 - y});
    case DomainKind::disk: return d.radius - std::hypot(x - d.center[0], y - d.center[1]);
  }
  throw config_error("mesh: unknown domain kind");
}

std::array<double, 2> distance_gradient(const DomainSpec& d, double x, double y) {
  switch (d.kind) {
    case DomainKind::unit_interval: return x <= 1.0 - x ? std::array{1.0, 0.0} : std::array{-1.0, 0.0};
    case DomainKind::unit_square: {
      const double v[4] = {x, 1.0 - x, y, 1.0 - y};
      int best = 0;
      for (int i = 1; i < 4; ++i) {
        if (v[i] < v[best]) best = i;
      }
      switch (best) {
        case 0: return {1.0, 0.0};
        case 1: return {-1.0, 0.0};
        case 2: return {0.0, 1.0};
        default: return {0.0, -1.0};
      }
    }
    case DomainKind::disk: {
      const double rx = x - d.center[0], ry = y - d.center[1];
      const double r = std::hypot(rx, ry);
      if (r == 0.0) return {0.0, 0.0};
      return {-rx / r, -ry / r};
    }
  }
  throw config_error("mesh: unknown domain kind");
}

double Mesh::cell_measure(int c) const {
  const auto& cell = cells[static_cast<std::size_t>(c)];
  if (dim == 1) return vertices[cell[1]][0] - vertices[cell[0]][0];
  const auto &a = vertices[cell[0]], &b = vertices[cell[1]], &p = vertices[cell[2]];
  return 0.5 * ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]));
}

double Mesh::measure() const {
  double s = 0.0;
  for (int c = 0; c < n_cells(); ++c) s += cell_measure(c);
  return s;
}

Mesh build_mesh(const DomainSpec& spec) {
  switch (spec.kind) {
    case DomainKind::unit_interval: return build_interval(spec);
    case DomainKind::unit_square: return build_square(spec);
    case DomainKind::disk: return build_disk(spec);
  }
  throw config_error("mesh: unknown domain kind");
}

std::vector<std::pair<int, int>> boundary_edges(const Mesh& mesh) {
  std::map<std::pair<int, int>, int> incidence;
  if (mesh.dim == 1) {
    std::vector<int> touch(static_cast<std::size_t>(mesh.n_vertices()), 0);
    for (const auto& cell : mesh.cells) {
      ++touch[static_cast<std::size_t>(cell[0])];
      ++touch[static_cast<std::size_t>(cell[1])];
    }
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      if (touch[static_cast<std::size_t>(v)] == 1) out.emplace_back(v, v);
    }
    return out;
  }
  for (const auto& cell : mesh.cells) {
    for (int e = 0; e < 3; ++e) {
      int a = cell[e], b = cell[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      ++incidence[{a, b}];
    }
  }
  std::vector<std::pair<int, int>> out;
  for (const auto& [edge, count] : incidence) {
    if (count == 1) out.push_back(edge);
  }
  return out;
}

std::size_t count_edges(const Mesh& mesh) {
  if (mesh.dim == 1) return mesh.cells.size();
  std::set<std::pair<int, int>> edges;
  for (const auto& cell : mesh.cells) {
    for (int e = 0; e < 3; ++e) {
      int a = cell[e], b = cell[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edges.insert({a, b});
    }
  }
  return edges.size();
}

Mesh refine(const Mesh& mesh) {
  VertexParents unused;
  return refine(mesh, unused);
}

Mesh refine(const Mesh& mesh, VertexParents& parents) {
  Mesh fine;
  fine.dim = mesh.dim;
  fine.domain = mesh.domain;
  fine.grid_step = 0.5 * mesh.grid_step;
  fine.refinement_level = mesh.refinement_level + 1;
  fine.vertices = mesh.vertices;
  parents.parent.assign(static_cast<std::size_t>(mesh.n_vertices()), {0, -1});
  for (int v = 0; v < mesh.n_vertices(); ++v) parents.parent[static_cast<std::size_t>(v)] = {v, -1};

  if (mesh.dim == 1) {
    for (const auto& cell : mesh.cells) {
      const auto& a = mesh.vertices[static_cast<std::size_t>(cell[0])];
      const auto& b = mesh.vertices[static_cast<std::size_t>(cell[1])];
      const int mid = fine.n_vertices();
      fine.vertices.push_back({0.5 * (a[0] + b[0]), 0.0});
      parents.parent.push_back({cell[0], cell[1]});
      fine.cells.push_back({cell[0], mid, -1});
      fine.cells.push_back({mid, cell[1], -1});
    }
    rebuild_boundary(fine);
    finalize_metrics(fine);
    return fine;
  }

  std::set<std::pair<int, int>> boundary;
  for (const auto& e : boundary_edges(mesh)) boundary.insert(e);

  // Sorted edge traversal keeps midpoint numbering deterministic.
  std::map<std::pair<int, int>, int> midpoint;
  for (const auto& cell : mesh.cells) {
    for (int e = 0; e < 3; ++e) {
      int a = cell[e], b = cell[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      midpoint.emplace(std::pair{a, b}, -1);
    }
  }
  for (auto& [edge, idx] : midpoint) {
    idx = fine.n_vertices();
    const auto& a = mesh.vertices[static_cast<std::size_t>(edge.first)];
    const auto& b = mesh.vertices[static_cast<std::size_t>(edge.second)];
    std::array<double, 2> p{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    if (mesh.domain.kind == DomainKind::disk && boundary.count(edge)) {
      const double rx = p[0] - mesh.domain.center[0], ry = p[1] - mesh.domain.center[1];
      const double r = std::hypot(rx, ry);
      p[0] = mesh.domain.center[0] + mesh.domain.radius * rx / r;
      p[1] = mesh.domain.center[1] + mesh.domain.radius * ry / r;
    }
    fine.vertices.push_back(p);
    parents.parent.push_back({edge.first, edge.second});
  }

  const auto mid = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    return midpoint.at({a, b});
  };
  fine.cells.reserve(mesh.cells.size() * 4);
  for (const auto& cell : mesh.cells) {
    const int a = cell[0], b = cell[1], c = cell[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    fine.cells.push_back({a, ab, ca});
    fine.cells.push_back({ab, b, bc});
    fine.cells.push_back({ca, bc, c});
    fine.cells.push_back({ab, bc, ca});
  }
  rebuild_boundary(fine);
  finalize_metrics(fine);
  return fine;
}

double max_boundary_deviation(const Mesh& mesh) {
  if (mesh.domain.kind != DomainKind::disk) return 0.0;
  double dev = 0.0;
  for (const auto& e : boundary_edges(mesh)) {
    const auto& a = mesh.vertices[static_cast<std::size_t>(e.first)];
    const auto& b = mesh.vertices[static_cast<std::size_t>(e.second)];
    const double mx = 0.5 * (a[0] + b[0]) - mesh.domain.center[0];
    const double my = 0.5 * (a[1] + b[1]) - mesh.domain.center[1];
    dev = std::max(dev, std::abs(mesh.domain.radius - std::hypot(mx, my)));
  }
  return dev;
}

void rebuild_derived(Mesh& mesh) {
  rebuild_boundary(mesh);
  finalize_metrics(mesh);
}

}  // namespace wavecontrol
