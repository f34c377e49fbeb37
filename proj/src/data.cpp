#include "wavecontrol/data.hpp"

#include <cmath>
#include <numbers>

namespace wavecontrol {

Datum Datum::zero() {
  Datum d;
  d.name = "zero";
  d.is_zero = true;
  d.fn = [](double, double) { return 0.0; };
  d.grad = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  return d;
}

Datum Datum::analytic(std::string name, ScalarFn fn, GradientFn grad) {
  Datum d;
  d.name = std::move(name);
  d.is_zero = false;
  d.fn = std::move(fn);
  d.grad = std::move(grad);
  return d;
}

Datum Datum::from_dofs(Vector dofs) {
  Datum d;
  d.name = "nodal";
  d.is_zero = false;
  d.nodal = std::move(dofs);
  return d;
}

Datum preset_sine(int dim, int k, int l, double amplitude) {
  using std::numbers::pi;
  if (k < 1 || (dim == 2 && l < 1)) throw config_error("data: sine preset needs k, l >= 1");
  if (dim == 1) {
    return Datum::analytic(
        "sine k=" + std::to_string(k),
        [k, amplitude](double x, double) { return amplitude * std::sin(k * pi * x); },
        [k, amplitude](double x, double) {
          return std::array<double, 2>{amplitude * k * pi * std::cos(k * pi * x), 0.0};
        });
  }
  return Datum::analytic(
      "sine k=" + std::to_string(k) + " l=" + std::to_string(l),
      [k, l, amplitude](double x, double y) {
        return amplitude * std::sin(k * pi * x) * std::sin(l * pi * y);
      },
      [k, l, amplitude](double x, double y) {
        return std::array<double, 2>{
            amplitude * k * pi * std::cos(k * pi * x) * std::sin(l * pi * y),
            amplitude * l * pi * std::sin(k * pi * x) * std::cos(l * pi * y)};
      });
}

Datum preset_radial_cosine(const DomainSpec& disk, double amplitude) {
  using std::numbers::pi;
  if (disk.kind != DomainKind::disk) {
    throw config_error("data: radial cosine preset is defined on the disk");
  }
  const double R = disk.radius;
  const double cx = disk.center[0], cy = disk.center[1];
  return Datum::analytic(
      "radial_cosine",
      [=](double x, double y) {
        const double r = std::hypot(x - cx, y - cy);
        return amplitude * std::cos(0.5 * pi * r / R);
      },
      [=](double x, double y) {
        const double rx = x - cx, ry = y - cy;
        const double r = std::hypot(rx, ry);
        if (r == 0.0) return std::array<double, 2>{0.0, 0.0};
        const double s = -amplitude * 0.5 * pi / R * std::sin(0.5 * pi * r / R) / r;
        return std::array<double, 2>{s * rx, s * ry};
      });
}

double boundary_trace_max(const Datum& g, const DomainSpec& domain, int samples) {
  if (g.is_zero || g.nodal.has_value()) return 0.0;
  double worst = 0.0;
  const auto probe = [&](double x, double y) { worst = std::max(worst, std::abs(g.fn(x, y))); };
  if (domain.kind == DomainKind::unit_interval) {
    probe(0.0, 0.0);
    probe(1.0, 0.0);
    return worst;
  }
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    if (domain.kind == DomainKind::unit_square) {
      probe(t, 0.0);
      probe(t, 1.0);
      probe(0.0, t);
      probe(1.0, t);
    } else {
      const double a = 2.0 * std::numbers::pi * t;
      probe(domain.center[0] + domain.radius * std::cos(a),
            domain.center[1] + domain.radius * std::sin(a));
    }
  }
  return worst;
}

Vector nodal_representation(const Datum& g, const FemSpace& space, bool elliptic) {
  if (g.nodal.has_value()) {
    if (g.nodal->size() != space.n_dofs) {
      throw shape_error("data: nodal datum length does not match the space");
    }
    return *g.nodal;
  }
  if (g.is_zero) return Vector::Zero(space.n_dofs);
  return elliptic ? h1_projection(space, g.fn, g.grad) : l2_projection(space, g.fn);
}

}  // namespace wavecontrol
