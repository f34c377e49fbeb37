#pragma once

#include <array>

#include "wavecontrol/fem.hpp"
#include "wavecontrol/mesh.hpp"

namespace wavecontrol {

enum class CutoffKind { boundary_collar, interior_bump };

/** Control-region cutoff description.
    boundary_collar: chi = 1 within distance r - delta of the boundary, 0 at
    depth >= r, smooth monotone transition in between.
    interior_bump: chi = 1 on the disk of the given radius minus delta around
    `center`, 0 outside the bump region. */
struct CutoffSpec {
  CutoffKind kind = CutoffKind::boundary_collar;
  double r = 0.3;
  double delta = 0.1;
  std::array<double, 2> center{0.5, 0.0};  // interior_bump only
  double radius = 0.25;                    // interior_bump only
};

/// C-infinity step: 0 for t <= 0, 1 for t >= 1, with S(t) + S(1-t) = 1.
double smoothstep(double t);
double smoothstep_derivative(double t);

/** Smooth cutoff function for a domain; evaluable anywhere in the domain with
    values in [0, 1] and a gradient defined wherever the underlying distance
    function is differentiable. */
struct CutoffFn {
  DomainSpec domain;
  CutoffSpec spec;

  double operator()(double x, double y) const;
  std::array<double, 2> gradient(double x, double y) const;
};

/// Validates the geometry (transition band inside the domain, nonempty plateau
/// and nonempty zero region) and returns the evaluator.
CutoffFn build_cutoff(const DomainSpec& domain, const CutoffSpec& spec);

/// Nodal interpolation of the cutoff at every mesh vertex.
Vector discretize_cutoff(const CutoffFn& chi, const Mesh& mesh);

}  // namespace wavecontrol
