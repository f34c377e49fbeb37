#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <vector>

#include "wavecontrol/mesh.hpp"
#include "wavecontrol/timegrid.hpp"

namespace wavecontrol {

/// Row-major compressed storage, i.e. CSR: outer offsets are row offsets,
/// inner indices are column indices.
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

using ScalarFn = std::function<double(double, double)>;
using GradientFn = std::function<std::array<double, 2>(double, double)>;

/** Continuous P1 space with homogeneous Dirichlet conditions imposed by
    eliminating boundary vertices; dofs enumerate interior vertices in vertex
    order. */
struct FemSpace {
  const Mesh* mesh = nullptr;
  std::vector<int> dof_of_vertex;  // -1 on boundary
  std::vector<int> vertex_of_dof;
  int n_dofs = 0;
};

FemSpace make_space(const Mesh& mesh);

// Interior-dof matrices. Entries are exact P1 integrals (closed-form element
// matrices, equivalent to quadrature of the exact polynomial degree).
SpMat assemble_mass(const FemSpace& space);
SpMat assemble_stiffness(const FemSpace& space);

/// Mass matrix weighted by the P1 function with the given ALL-vertex nodal
/// values; the cubic integrand is integrated exactly. Negative nodal weights
/// are rejected.
SpMat assemble_weighted_mass(const FemSpace& space, const Vector& vertex_weights);

// All-vertex variants (no boundary elimination), used by partition-of-unity
// style checks and oracles.
SpMat assemble_mass_vertices(const Mesh& mesh);
SpMat assemble_stiffness_vertices(const Mesh& mesh);

/// Nodal interpolation at every vertex.
Vector nodal_values(const Mesh& mesh, const ScalarFn& fn);
/// Nodal interpolation restricted to interior dofs.
Vector interpolate(const FemSpace& space, const ScalarFn& fn);

Vector vertex_values_from_dofs(const FemSpace& space, const Vector& dofs);
Vector restrict_to_dofs(const FemSpace& space, const Vector& vertex_values);

/// Elliptic projection: a_h(pi_h u, v) = a_h(u, v) for all v in the space.
Vector h1_projection(const FemSpace& space, const ScalarFn& u, const GradientFn& grad_u,
                     int quad_degree = 4);
/// L2 projection onto the space.
Vector l2_projection(const FemSpace& space, const ScalarFn& u, int quad_degree = 4);

double l2_error(const FemSpace& space, const Vector& dofs, const ScalarFn& exact,
                int quad_degree = 5);
double h1_seminorm_error(const FemSpace& space, const Vector& dofs, const GradientFn& exact_grad,
                         int quad_degree = 5);

/// Dof-level prolongation for one nested refinement (coarse space to fine
/// space); exact on coarse functions because the spaces are nested.
SpMat prolongation_matrix(const FemSpace& coarse, const FemSpace& fine,
                          const VertexParents& parents);
/// Vertex-level prolongation (all vertices, no boundary elimination).
SpMat prolongation_vertices(int n_coarse_vertices, const VertexParents& parents);

/** Extremal generalized eigenvalues of K x = lambda M x and the induced
    inverse-inequality constants kappa = max(h, tau) * sqrt(lambda_max),
    kappa_tilde = sqrt(lambda_min). */
struct InverseConstants {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double kappa = 0.0;
  double kappa_tilde = 0.0;
  int iterations_max = 0;
  int iterations_min = 0;
};

InverseConstants estimate_inverse_constants(const FemSpace& space, const TimeGrid& grid,
                                            double rel_tol = 1e-6, int max_iter = 10000,
                                            unsigned seed = 0x5eed);

}  // namespace wavecontrol
