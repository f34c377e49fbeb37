#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "wavecontrol/errors.hpp"

namespace wavecontrol {

enum class DomainKind { unit_interval, unit_square, disk };

struct DomainSpec {
  DomainKind kind = DomainKind::unit_interval;
  double target_h = 0.25;
  double radius = 1.0;                  // disk only
  std::array<double, 2> center{0, 0};   // disk only
};

double domain_diameter(const DomainSpec& d);
double domain_inradius(const DomainSpec& d);

/// Distance from an interior point to the boundary of the continuous domain.
double distance_to_boundary(const DomainSpec& d, double x, double y);

/// Gradient of distance_to_boundary where it is differentiable; on the ridge
/// set of the square the branch of the nearest side with the smallest index
/// (left, right, bottom, top) is returned.
std::array<double, 2> distance_gradient(const DomainSpec& d, double x, double y);

/** Simplicial mesh: intervals in 1D, triangles in 2D. Triangles are stored
    counterclockwise; 1D cells use {a, b, -1}. Boundary data is derived from
    the cell incidence (an edge on exactly one cell is a boundary edge). */
struct Mesh {
  int dim = 1;
  DomainSpec domain;
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<int> boundary_vertices;   // ascending
  std::vector<char> vertex_on_boundary;
  std::vector<double> h_cell;           // per-cell diameter
  double h = 0.0;                       // max over cells
  double h_min = 0.0;                   // min over cells
  double grid_step = 0.0;               // structural step the builder targeted
  int refinement_level = 0;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  double cell_measure(int c) const;
  double measure() const;
  double quasi_uniformity() const { return h_min > 0.0 ? h / h_min : 0.0; }
};

/** Builds the vertex set, cells and boundary flags for the requested domain.
    unit_interval / unit_square use a uniform grid of step 1/m with
    m = ceil(1/target_h); the disk starts from a regular octagon fan around the
    center and refines (projecting boundary midpoints to the circle) until the
    boundary chord length is at most target_h. */
Mesh build_mesh(const DomainSpec& spec);

/// Fine vertex -> its parent coarse vertices; parent[1] == -1 for carried-over
/// vertices, otherwise the vertex is the (possibly projected) edge midpoint.
struct VertexParents {
  std::vector<std::array<int, 2>> parent;
};

/** One uniform refinement: every triangle splits into four (intervals into
    two). Parent vertices keep their indices; midpoints are appended in sorted
    edge order, so numbering is deterministic. For disks, midpoints of boundary
    edges are projected radially to the circle. */
Mesh refine(const Mesh& mesh);
Mesh refine(const Mesh& mesh, VertexParents& parents);

/// Max distance from boundary-edge midpoints to the continuous boundary
/// (0 for the interval and square, the chord sagitta for the disk).
double max_boundary_deviation(const Mesh& mesh);

std::vector<std::pair<int, int>> boundary_edges(const Mesh& mesh);
std::size_t count_edges(const Mesh& mesh);

/// Recomputes boundary flags and size metrics from vertices and cells alone
/// (for meshes reconstructed from files); throws on degenerate cells.
void rebuild_derived(Mesh& mesh);

}  // namespace wavecontrol
