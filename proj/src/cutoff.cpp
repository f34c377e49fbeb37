#include "wavecontrol/cutoff.hpp"

#include <cmath>

namespace wavecontrol {

namespace {

double bump_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double bump_exp_derivative(double t) {
  if (t <= 0.0) return 0.0;
  const double e = std::exp(-1.0 / t);
  return e / (t * t);
}

}  // namespace

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double f = bump_exp(t), g = bump_exp(1.0 - t);
  return f / (f + g);
}

double smoothstep_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double f = bump_exp(t), g = bump_exp(1.0 - t);
  const double df = bump_exp_derivative(t), dg = bump_exp_derivative(1.0 - t);
  return (df * g + f * dg) / ((f + g) * (f + g));
}

double CutoffFn::operator()(double x, double y) const {
  if (spec.kind == CutoffKind::boundary_collar) {
    const double d = distance_to_boundary(domain, x, y);
    return smoothstep((spec.r - d) / spec.delta);
  }
  const double rho = std::hypot(x - spec.center[0], domain.kind == DomainKind::unit_interval
                                                        ? 0.0
                                                        : y - spec.center[1]);
  const double interior = spec.radius - rho;  // distance to the bump boundary
  return smoothstep((interior - 0.5 * spec.delta) / (0.5 * spec.delta));
}

std::array<double, 2> CutoffFn::gradient(double x, double y) const {
  if (spec.kind == CutoffKind::boundary_collar) {
    const double d = distance_to_boundary(domain, x, y);
    const double s = smoothstep_derivative((spec.r - d) / spec.delta);
    if (s == 0.0) return {0.0, 0.0};
    const auto dd = distance_gradient(domain, x, y);
    return {-s * dd[0] / spec.delta, -s * dd[1] / spec.delta};
  }
  const double dx = x - spec.center[0];
  const double dy = domain.kind == DomainKind::unit_interval ? 0.0 : y - spec.center[1];
  const double rho = std::hypot(dx, dy);
  const double arg = (spec.radius - rho - 0.5 * spec.delta) / (0.5 * spec.delta);
  const double s = smoothstep_derivative(arg);
  if (s == 0.0 || rho == 0.0) return {0.0, 0.0};
  const double factor = -s * 2.0 / (spec.delta * rho);
  return {factor * dx, factor * dy};
}

CutoffFn build_cutoff(const DomainSpec& domain, const CutoffSpec& spec) {
  if (!(spec.delta > 0.0)) throw config_error("cutoff: delta must be positive");
  if (spec.kind == CutoffKind::boundary_collar) {
    if (!(spec.r > spec.delta)) {
      throw config_error("cutoff: collar needs r > delta so the chi = 1 plateau is nonempty");
    }
    if (!(spec.r < domain_inradius(domain))) {
      throw config_error("cutoff: collar depth r must stay below the domain inradius");
    }
  } else {
    if (!(spec.radius > spec.delta)) {
      throw config_error("cutoff: bump needs radius > delta so the chi = 1 plateau is nonempty");
    }
    const double cy = domain.kind == DomainKind::unit_interval ? 0.0 : spec.center[1];
    const double d = distance_to_boundary(domain, spec.center[0], cy);
    if (!(d > spec.radius)) {
      throw config_error("cutoff: bump region must lie strictly inside the domain");
    }
  }
  return CutoffFn{domain, spec};
}

Vector discretize_cutoff(const CutoffFn& chi, const Mesh& mesh) {
  return nodal_values(mesh, [&chi](double x, double y) { return chi(x, y); });
}

}  // namespace wavecontrol
