#include <cmath>

#include "doctest.h"
#include "wavecontrol/mesh.hpp"

using namespace wavecontrol;

namespace {

DomainSpec interval(double target_h) {
  DomainSpec d;
  d.kind = DomainKind::unit_interval;
  d.target_h = target_h;
  return d;
}

DomainSpec square(double target_h) {
  DomainSpec d;
  d.kind = DomainKind::unit_square;
  d.target_h = target_h;
  return d;
}

DomainSpec disk(double target_h, double radius = 1.0) {
  DomainSpec d;
  d.kind = DomainKind::disk;
  d.target_h = target_h;
  d.radius = radius;
  return d;
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("unit interval builder produces the uniform grid it targeted") {
    const Mesh m = build_mesh(interval(0.25));
    CHECK(m.dim == 1);
    CHECK(m.n_vertices() == 5);
    CHECK(m.n_cells() == 4);
    CHECK(m.grid_step == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(m.h == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(m.measure() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.quasi_uniformity() == doctest::Approx(1.0).epsilon(1e-13));
    for (int i = 0; i < 5; ++i) {
      CHECK(m.vertices[static_cast<std::size_t>(i)][0] ==
            doctest::Approx(0.25 * i).epsilon(1e-15));
    }
    CHECK(m.boundary_vertices == std::vector<int>{0, 4});
    // Interval Euler characteristic: V - C = 1.
    CHECK(m.n_vertices() - m.n_cells() == 1);
    // target_h = 0.3 rounds the subdivision up, never coarser than asked.
    CHECK(build_mesh(interval(0.3)).grid_step == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(build_mesh(interval(0.0)), config_error);
    CHECK_THROWS_AS(build_mesh(interval(1.5)), config_error);
  }

  TEST_CASE("unit square builder is a consistent oriented triangulation") {
    const Mesh m = build_mesh(square(0.5));
    CHECK(m.dim == 2);
    CHECK(m.n_vertices() == 9);
    CHECK(m.n_cells() == 8);
    CHECK(m.measure() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m.boundary_vertices.size() == 8);
    for (int c = 0; c < m.n_cells(); ++c) CHECK(m.cell_measure(c) > 0.0);  // CCW storage
    // Euler characteristic on a disk-like domain: V - E + T = 1.
    CHECK(m.n_vertices() - static_cast<int>(count_edges(m)) + m.n_cells() == 1);
    CHECK(max_boundary_deviation(m) == doctest::Approx(0.0).epsilon(1e-15));
  }

  TEST_CASE("refinement quadruples triangles and keeps the Euler count") {
    const Mesh coarse = build_mesh(square(0.5));
    VertexParents parents;
    const Mesh fine = refine(coarse, parents);
    CHECK(fine.n_cells() == 4 * coarse.n_cells());
    CHECK(fine.n_vertices() == 25);
    CHECK(fine.refinement_level == coarse.refinement_level + 1);
    CHECK(fine.grid_step == doctest::Approx(0.5 * coarse.grid_step).epsilon(1e-15));
    CHECK(fine.n_vertices() - static_cast<int>(count_edges(fine)) + fine.n_cells() == 1);
    CHECK(fine.measure() == doctest::Approx(1.0).epsilon(1e-13));
    // Parent bookkeeping: carried vertices first, then one entry per edge.
    REQUIRE(static_cast<int>(parents.parent.size()) == fine.n_vertices());
    for (int v = 0; v < coarse.n_vertices(); ++v) {
      CHECK(parents.parent[static_cast<std::size_t>(v)][0] == v);
      CHECK(parents.parent[static_cast<std::size_t>(v)][1] == -1);
    }
    for (int v = coarse.n_vertices(); v < fine.n_vertices(); ++v) {
      const auto [a, b] = parents.parent[static_cast<std::size_t>(v)];
      REQUIRE(a >= 0);
      REQUIRE(b >= 0);
      const auto& pa = coarse.vertices[static_cast<std::size_t>(a)];
      const auto& pb = coarse.vertices[static_cast<std::size_t>(b)];
      CHECK(fine.vertices[static_cast<std::size_t>(v)][0] ==
            doctest::Approx(0.5 * (pa[0] + pb[0])).epsilon(1e-14));
      CHECK(fine.vertices[static_cast<std::size_t>(v)][1] ==
            doctest::Approx(0.5 * (pa[1] + pb[1])).epsilon(1e-14));
    }
    // Deterministic numbering: refining twice gives identical meshes.
    const Mesh again = refine(coarse);
    REQUIRE(again.n_vertices() == fine.n_vertices());
    for (int v = 0; v < fine.n_vertices(); ++v) {
      CHECK(again.vertices[static_cast<std::size_t>(v)][0] ==
            fine.vertices[static_cast<std::size_t>(v)][0]);
      CHECK(again.vertices[static_cast<std::size_t>(v)][1] ==
            fine.vertices[static_cast<std::size_t>(v)][1]);
    }
  }

  TEST_CASE("disk meshes stay on the circle and fill the inscribed polygon") {
    const Mesh m = build_mesh(disk(0.5));
    CHECK(m.dim == 2);
    int n_boundary = 0;
    double max_chord = 0.0;
    for (const auto& [a, b] : boundary_edges(m)) {
      const auto& pa = m.vertices[static_cast<std::size_t>(a)];
      const auto& pb = m.vertices[static_cast<std::size_t>(b)];
      max_chord = std::max(max_chord, std::hypot(pa[0] - pb[0], pa[1] - pb[1]));
    }
    CHECK(max_chord <= 0.5 + 1e-12);
    for (int v : m.boundary_vertices) {
      ++n_boundary;
      const auto& p = m.vertices[static_cast<std::size_t>(v)];
      CHECK(std::hypot(p[0], p[1]) == doctest::Approx(1.0).epsilon(1e-13));
    }
    // Mesh area = area of the regular inscribed n-gon.
    const double polygon = 0.5 * n_boundary * std::sin(2.0 * M_PI / n_boundary);
    CHECK(m.measure() == doctest::Approx(polygon).epsilon(1e-12));
    // Sagitta bound: boundary midpoints sit within 1 - sqrt(1 - c^2/4) of the
    // unit circle, with c the longest boundary chord.
    const double sagitta = 1.0 - std::sqrt(1.0 - max_chord * max_chord / 4.0);
    CHECK(max_boundary_deviation(m) <= sagitta + 1e-12);

    const Mesh fine = refine(m);
    for (int v : fine.boundary_vertices) {
      const auto& p = fine.vertices[static_cast<std::size_t>(v)];
      CHECK(std::hypot(p[0], p[1]) == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(fine.measure() > m.measure());  // closer to the disk
    CHECK(fine.measure() < M_PI);
  }

  TEST_CASE("boundary distances and their gradients match the geometry") {
    CHECK(distance_to_boundary(interval(0.25), 0.3, 0.0) == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(distance_to_boundary(square(0.25), 0.25, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(distance_to_boundary(square(0.25), 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(distance_to_boundary(disk(0.5), 0.5, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(domain_diameter(square(0.25)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(domain_inradius(square(0.25)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(domain_inradius(disk(0.5, 2.0)) == doctest::Approx(2.0).epsilon(1e-14));
    // Nearest side left: d = x grows inward.
    const auto g = distance_gradient(square(0.25), 0.2, 0.5);
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(0.0).epsilon(1e-14));
    // On the disk the distance gradient points toward the center.
    const auto gd = distance_gradient(disk(0.5), 0.5, 0.0);
    CHECK(gd[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(gd[1] == doctest::Approx(0.0).epsilon(1e-14));
  }

  TEST_CASE("rebuild_derived recovers flags and sizes from raw arrays") {
    const Mesh reference = build_mesh(square(0.5));
    Mesh raw;
    raw.dim = reference.dim;
    raw.domain = reference.domain;
    raw.vertices = reference.vertices;
    raw.cells = reference.cells;
    raw.grid_step = reference.grid_step;
    raw.refinement_level = reference.refinement_level;
    rebuild_derived(raw);
    CHECK(raw.h == doctest::Approx(reference.h).epsilon(1e-14));
    CHECK(raw.h_min == doctest::Approx(reference.h_min).epsilon(1e-14));
    CHECK(raw.boundary_vertices == reference.boundary_vertices);
    CHECK(raw.vertex_on_boundary == reference.vertex_on_boundary);

    // A repeated vertex collapses a cell to zero measure.
    Mesh bad = raw;
    bad.cells[0] = {0, 0, 1};
    CHECK_THROWS_AS(rebuild_derived(bad), shape_error);
  }
}
