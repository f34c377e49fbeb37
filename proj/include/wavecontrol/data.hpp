#pragma once

#include <optional>
#include <string>

#include "wavecontrol/fem.hpp"
#include "wavecontrol/mesh.hpp"

namespace wavecontrol {

/** Initial datum, either analytic (function plus gradient, needed for the
    elliptic projection) or already given as interior-dof coefficients. */
struct Datum {
  std::string name = "zero";
  bool is_zero = true;
  ScalarFn fn;
  GradientFn grad;
  std::optional<Vector> nodal;  // interior dofs; overrides fn when present

  static Datum zero();
  static Datum analytic(std::string name, ScalarFn fn, GradientFn grad);
  static Datum from_dofs(Vector dofs);
};

/// Position datum g0 and velocity datum g1 for the controlled wave problem.
struct ProblemData {
  Datum g0 = Datum::zero();
  Datum g1 = Datum::zero();
};

/// amplitude * sin(k pi x) in 1D, amplitude * sin(k pi x) sin(l pi y) in 2D.
Datum preset_sine(int dim, int k, int l, double amplitude);
/// amplitude * cos(pi |x - c| / (2R)) on the disk; vanishes on the boundary.
Datum preset_radial_cosine(const DomainSpec& disk, double amplitude);

/// Max |g0| sampled along the continuous boundary; compatibility check data.
double boundary_trace_max(const Datum& g, const DomainSpec& domain, int samples = 100);

/// Interior-dof coefficients of a datum: pass-through for nodal data, zero
/// for the zero datum, otherwise the elliptic projection when `elliptic` and
/// the L2 projection when not.
Vector nodal_representation(const Datum& g, const FemSpace& space, bool elliptic);

}  // namespace wavecontrol
