#include "wavecontrol/fem.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <random>

#include "wavecontrol/quadrature.hpp"

namespace wavecontrol {

namespace {

struct ElementGeometry {
  double measure = 0.0;
  // Constant P1 shape gradients, one per local node.
  std::array<std::array<double, 2>, 3> grad{};
  int n_nodes = 2;
};

ElementGeometry element_geometry(const Mesh& mesh, int cell) {
  const auto& c = mesh.cells[static_cast<std::size_t>(cell)];
  ElementGeometry g;
  if (mesh.dim == 1) {
    const double L = mesh.cell_measure(cell);
    g.measure = L;
    g.grad[0] = {-1.0 / L, 0.0};
    g.grad[1] = {1.0 / L, 0.0};
    g.n_nodes = 2;
    return g;
  }
  const auto& p0 = mesh.vertices[static_cast<std::size_t>(c[0])];
  const auto& p1 = mesh.vertices[static_cast<std::size_t>(c[1])];
  const auto& p2 = mesh.vertices[static_cast<std::size_t>(c[2])];
  const double A = mesh.cell_measure(cell);
  g.measure = A;
  const double inv = 1.0 / (2.0 * A);
  g.grad[0] = {(p1[1] - p2[1]) * inv, (p2[0] - p1[0]) * inv};
  g.grad[1] = {(p2[1] - p0[1]) * inv, (p0[0] - p2[0]) * inv};
  g.grad[2] = {(p0[1] - p1[1]) * inv, (p1[0] - p0[0]) * inv};
  g.n_nodes = 3;
  return g;
}

// Exact integral over the cell of l_i l_j l_k divided by the cell measure.
double cubic_moment(int dim, int i, int j, int k) {
  if (dim == 1) {
    return (i == j && j == k) ? 0.25 : 1.0 / 12.0;
  }
  if (i == j && j == k) return 0.1;
  if (i == j || j == k || i == k) return 1.0 / 30.0;
  return 1.0 / 60.0;
}

enum class Kind { mass, stiffness };

SpMat assemble_p1(const Mesh& mesh, const std::vector<int>& index_of_vertex, int n_index,
                  Kind kind, const Vector* vertex_weights) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.n_cells()) * 9);
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const auto& c = mesh.cells[static_cast<std::size_t>(cell)];
    const ElementGeometry g = element_geometry(mesh, cell);
    for (int i = 0; i < g.n_nodes; ++i) {
      const int gi = index_of_vertex[static_cast<std::size_t>(c[i])];
      if (gi < 0) continue;
      for (int j = 0; j < g.n_nodes; ++j) {
        const int gj = index_of_vertex[static_cast<std::size_t>(c[j])];
        if (gj < 0) continue;
        double value = 0.0;
        if (kind == Kind::stiffness) {
          value = g.measure * (g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1]);
        } else if (vertex_weights == nullptr) {
          if (mesh.dim == 1) {
            value = g.measure * (i == j ? 1.0 / 3.0 : 1.0 / 6.0);
          } else {
            value = g.measure * (i == j ? 1.0 / 6.0 : 1.0 / 12.0);
          }
        } else {
          for (int k = 0; k < g.n_nodes; ++k) {
            const double w = (*vertex_weights)(c[k]);
            value += w * g.measure * cubic_moment(mesh.dim, i, j, k);
          }
        }
        triplets.emplace_back(gi, gj, value);
      }
    }
  }
  SpMat out(n_index, n_index);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

std::vector<int> identity_index(int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  return idx;
}

}  // namespace

FemSpace make_space(const Mesh& mesh) {
  FemSpace space;
  space.mesh = &mesh;
  space.dof_of_vertex.assign(static_cast<std::size_t>(mesh.n_vertices()), -1);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (!mesh.vertex_on_boundary[static_cast<std::size_t>(v)]) {
      space.dof_of_vertex[static_cast<std::size_t>(v)] = space.n_dofs++;
      space.vertex_of_dof.push_back(v);
    }
  }
  if (space.n_dofs == 0) throw config_error("fem: mesh has no interior vertices");
  return space;
}

SpMat assemble_mass(const FemSpace& space) {
  return assemble_p1(*space.mesh, space.dof_of_vertex, space.n_dofs, Kind::mass, nullptr);
}

SpMat assemble_stiffness(const FemSpace& space) {
  return assemble_p1(*space.mesh, space.dof_of_vertex, space.n_dofs, Kind::stiffness, nullptr);
}

SpMat assemble_weighted_mass(const FemSpace& space, const Vector& vertex_weights) {
  if (vertex_weights.size() != space.mesh->n_vertices()) {
    throw shape_error("weighted mass: weights must be given at every vertex");
  }
  for (Eigen::Index i = 0; i < vertex_weights.size(); ++i) {
    if (vertex_weights(i) < 0.0) {
      throw config_error("weighted mass: negative nodal weight at vertex " + std::to_string(i));
    }
  }
  return assemble_p1(*space.mesh, space.dof_of_vertex, space.n_dofs, Kind::mass,
                     &vertex_weights);
}

SpMat assemble_mass_vertices(const Mesh& mesh) {
  return assemble_p1(mesh, identity_index(mesh.n_vertices()), mesh.n_vertices(), Kind::mass,
                     nullptr);
}

SpMat assemble_stiffness_vertices(const Mesh& mesh) {
  return assemble_p1(mesh, identity_index(mesh.n_vertices()), mesh.n_vertices(),
                     Kind::stiffness, nullptr);
}

Vector nodal_values(const Mesh& mesh, const ScalarFn& fn) {
  Vector v(mesh.n_vertices());
  for (int i = 0; i < mesh.n_vertices(); ++i) {
    const auto& p = mesh.vertices[static_cast<std::size_t>(i)];
    v(i) = fn(p[0], p[1]);
  }
  return v;
}

Vector interpolate(const FemSpace& space, const ScalarFn& fn) {
  Vector v(space.n_dofs);
  for (int d = 0; d < space.n_dofs; ++d) {
    const auto& p = space.mesh->vertices[static_cast<std::size_t>(space.vertex_of_dof[d])];
    v(d) = fn(p[0], p[1]);
  }
  return v;
}

Vector vertex_values_from_dofs(const FemSpace& space, const Vector& dofs) {
  if (dofs.size() != space.n_dofs) throw shape_error("fem: dof vector has wrong length");
  Vector v = Vector::Zero(space.mesh->n_vertices());
  for (int d = 0; d < space.n_dofs; ++d) v(space.vertex_of_dof[d]) = dofs(d);
  return v;
}

Vector restrict_to_dofs(const FemSpace& space, const Vector& vertex_values) {
  if (vertex_values.size() != space.mesh->n_vertices()) {
    throw shape_error("fem: vertex vector has wrong length");
  }
  Vector v(space.n_dofs);
  for (int d = 0; d < space.n_dofs; ++d) v(d) = vertex_values(space.vertex_of_dof[d]);
  return v;
}

Vector h1_projection(const FemSpace& space, const ScalarFn& u, const GradientFn& grad_u,
                     int quad_degree) {
  (void)u;
  const Mesh& mesh = *space.mesh;
  Vector rhs = Vector::Zero(space.n_dofs);
  const QuadRule& rule = mesh.dim == 1 ? interval_rule(quad_degree) : triangle_rule(quad_degree);
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const auto& c = mesh.cells[static_cast<std::size_t>(cell)];
    const ElementGeometry g = element_geometry(mesh, cell);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      double x = 0.0, y = 0.0;
      for (int i = 0; i < g.n_nodes; ++i) {
        const auto& p = mesh.vertices[static_cast<std::size_t>(c[i])];
        x += l[i] * p[0];
        y += l[i] * p[1];
      }
      const auto du = grad_u(x, y);
      const double w = rule.weights[q] * g.measure;
      for (int i = 0; i < g.n_nodes; ++i) {
        const int dof = space.dof_of_vertex[static_cast<std::size_t>(c[i])];
        if (dof < 0) continue;
        rhs(dof) += w * (du[0] * g.grad[i][0] + du[1] * g.grad[i][1]);
      }
    }
  }
  Eigen::SparseMatrix<double> K = assemble_stiffness(space);
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(K);
  if (llt.info() != Eigen::Success) throw numeric_error("h1_projection: stiffness factorization failed");
  return llt.solve(rhs);
}

Vector l2_projection(const FemSpace& space, const ScalarFn& u, int quad_degree) {
  const Mesh& mesh = *space.mesh;
  Vector rhs = Vector::Zero(space.n_dofs);
  const QuadRule& rule = mesh.dim == 1 ? interval_rule(quad_degree) : triangle_rule(quad_degree);
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const auto& c = mesh.cells[static_cast<std::size_t>(cell)];
    const ElementGeometry g = element_geometry(mesh, cell);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      double x = 0.0, y = 0.0;
      for (int i = 0; i < g.n_nodes; ++i) {
        const auto& p = mesh.vertices[static_cast<std::size_t>(c[i])];
        x += l[i] * p[0];
        y += l[i] * p[1];
      }
      const double uw = u(x, y) * rule.weights[q] * g.measure;
      for (int i = 0; i < g.n_nodes; ++i) {
        const int dof = space.dof_of_vertex[static_cast<std::size_t>(c[i])];
        if (dof < 0) continue;
        rhs(dof) += uw * l[i];
      }
    }
  }
  Eigen::SparseMatrix<double> M = assemble_mass(space);
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(M);
  if (llt.info() != Eigen::Success) throw numeric_error("l2_projection: mass factorization failed");
  return llt.solve(rhs);
}

double l2_error(const FemSpace& space, const Vector& dofs, const ScalarFn& exact,
                int quad_degree) {
  const Mesh& mesh = *space.mesh;
  const Vector nodal = vertex_values_from_dofs(space, dofs);
  const QuadRule& rule = mesh.dim == 1 ? interval_rule(quad_degree) : triangle_rule(quad_degree);
  long double acc = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const auto& c = mesh.cells[static_cast<std::size_t>(cell)];
    const ElementGeometry g = element_geometry(mesh, cell);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      double x = 0.0, y = 0.0, uh = 0.0;
      for (int i = 0; i < g.n_nodes; ++i) {
        const auto& p = mesh.vertices[static_cast<std::size_t>(c[i])];
        x += l[i] * p[0];
        y += l[i] * p[1];
        uh += l[i] * nodal(c[i]);
      }
      const double diff = uh - exact(x, y);
      acc += static_cast<long double>(rule.weights[q] * g.measure) * diff * diff;
    }
  }
  return std::sqrt(static_cast<double>(acc));
}

double h1_seminorm_error(const FemSpace& space, const Vector& dofs, const GradientFn& exact_grad,
                         int quad_degree) {
  const Mesh& mesh = *space.mesh;
  const Vector nodal = vertex_values_from_dofs(space, dofs);
  const QuadRule& rule = mesh.dim == 1 ? interval_rule(quad_degree) : triangle_rule(quad_degree);
  long double acc = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const auto& c = mesh.cells[static_cast<std::size_t>(cell)];
    const ElementGeometry g = element_geometry(mesh, cell);
    double gx = 0.0, gy = 0.0;
    for (int i = 0; i < g.n_nodes; ++i) {
      gx += nodal(c[i]) * g.grad[i][0];
      gy += nodal(c[i]) * g.grad[i][1];
    }
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      double x = 0.0, y = 0.0;
      for (int i = 0; i < g.n_nodes; ++i) {
        const auto& p = mesh.vertices[static_cast<std::size_t>(c[i])];
        x += l[i] * p[0];
        y += l[i] * p[1];
      }
      const auto du = exact_grad(x, y);
      const double dx = gx - du[0], dy = gy - du[1];
      acc += static_cast<long double>(rule.weights[q] * g.measure) * (dx * dx + dy * dy);
    }
  }
  return std::sqrt(static_cast<double>(acc));
}

SpMat prolongation_matrix(const FemSpace& coarse, const FemSpace& fine,
                          const VertexParents& parents) {
  if (static_cast<int>(parents.parent.size()) != fine.mesh->n_vertices()) {
    throw shape_error("prolongation: parent map does not match fine mesh");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (int fv = 0; fv < fine.mesh->n_vertices(); ++fv) {
    const int fd = fine.dof_of_vertex[static_cast<std::size_t>(fv)];
    if (fd < 0) continue;
    const auto& par = parents.parent[static_cast<std::size_t>(fv)];
    if (par[1] < 0) {
      const int cd = coarse.dof_of_vertex[static_cast<std::size_t>(par[0])];
      if (cd >= 0) triplets.emplace_back(fd, cd, 1.0);
    } else {
      for (int s = 0; s < 2; ++s) {
        const int cd = coarse.dof_of_vertex[static_cast<std::size_t>(par[s])];
        if (cd >= 0) triplets.emplace_back(fd, cd, 0.5);
      }
    }
  }
  SpMat P(fine.n_dofs, coarse.n_dofs);
  P.setFromTriplets(triplets.begin(), triplets.end());
  return P;
}

SpMat prolongation_vertices(int n_coarse_vertices, const VertexParents& parents) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t fv = 0; fv < parents.parent.size(); ++fv) {
    const auto& par = parents.parent[fv];
    if (par[1] < 0) {
      triplets.emplace_back(static_cast<int>(fv), par[0], 1.0);
    } else {
      triplets.emplace_back(static_cast<int>(fv), par[0], 0.5);
      triplets.emplace_back(static_cast<int>(fv), par[1], 0.5);
    }
  }
  SpMat P(static_cast<int>(parents.parent.size()), n_coarse_vertices);
  P.setFromTriplets(triplets.begin(), triplets.end());
  return P;
}

InverseConstants estimate_inverse_constants(const FemSpace& space, const TimeGrid& grid,
                                            double rel_tol, int max_iter, unsigned seed) {
  const Eigen::SparseMatrix<double> M = assemble_mass(space);
  const Eigen::SparseMatrix<double> K = assemble_stiffness(space);
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> Mllt(M), Kllt(K);
  if (Mllt.info() != Eigen::Success || Kllt.info() != Eigen::Success) {
    throw numeric_error("inverse constants: factorization failed");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto random_vector = [&] {
    Vector v(space.n_dofs);
    for (int i = 0; i < space.n_dofs; ++i) v(i) = normal(rng);
    return v;
  };

  // Generalized power iteration; the Rayleigh quotient converges at the
  // squared rate of the eigenvector, so rel_tol on its increments suffices.
  const auto extremal = [&](bool largest, int& iterations) {
    Vector v = random_vector();
    v.normalize();
    double lambda = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
      Vector w = largest ? Vector(Mllt.solve(K * v)) : Vector(Kllt.solve(M * v));
      w.normalize();
      const double num = w.dot(K * w), den = w.dot(M * w);
      const double next = num / den;
      v = w;
      iterations = it;
      if (it > 1 && std::abs(next - lambda) <= rel_tol * 1e-3 * std::abs(next)) {
        return next;
      }
      lambda = next;
    }
    throw numeric_error("inverse constants: power iteration did not converge");
  };

  InverseConstants out;
  out.lambda_max = extremal(true, out.iterations_max);
  out.lambda_min = extremal(false, out.iterations_min);
  const double scale = std::max(space.mesh->h, grid.tau);
  out.kappa = scale * std::sqrt(out.lambda_max);
  out.kappa_tilde = std::sqrt(out.lambda_min);
  return out;
}

}  // namespace wavecontrol
