#pragma once

#include <array>
#include <functional>
#include <vector>

#include "wavecontrol/mesh.hpp"

namespace wavecontrol {

/** Reference-cell rule in barycentric coordinates; weights sum to 1 and are
    scaled by the cell measure when mapped. 1D rules use (l0, l1, 0). */
struct QuadRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Exact for polynomials up to the requested degree (supported degrees 1..5+;
/// higher requests return the strongest stored rule).
const QuadRule& interval_rule(int degree);
const QuadRule& triangle_rule(int degree);

/// Calls fn(x, y, w) for each mapped quadrature point of the cell, with w
/// already scaled by the cell measure.
void for_each_quad_point(const Mesh& mesh, int cell, int degree,
                         const std::function<void(double, double, double)>& fn);

/// Integral of fn over the mesh with the per-cell rule of the given degree.
double integrate(const Mesh& mesh, int degree,
                 const std::function<double(double, double)>& fn);

/// Exact simplex integral of products of barycentric coordinates,
/// integral of l0^a l1^b (l2^c) over the reference cell of measure 1.
double barycentric_moment_1d(int a, int b);
double barycentric_moment_2d(int a, int b, int c);

}  // namespace wavecontrol
