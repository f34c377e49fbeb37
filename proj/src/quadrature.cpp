#include "wavecontrol/quadrature.hpp"

#include <cmath>

namespace wavecontrol {

namespace {

QuadRule make_interval_simpson() {
  return {{{1.0, 0.0, 0.0}, {0.5, 0.5, 0.0}, {0.0, 1.0, 0.0}},
          {1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0}};
}

QuadRule make_interval_gauss3() {
  const double s = std::sqrt(3.0 / 5.0);
  QuadRule r;
  for (double t : {-s, 0.0, s}) {
    const double l1 = 0.5 * (1.0 + t);
    r.points.push_back({1.0 - l1, l1, 0.0});
  }
  r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  return r;
}

QuadRule make_interval_gauss5() {
  const double t1 = 0.9061798459386640, t2 = 0.5384693101056831;
  const double w1 = 0.2369268850561891, w2 = 0.4786286704993665, w0 = 0.5688888888888889;
  QuadRule r;
  for (double t : {-t1, -t2, 0.0, t2, t1}) {
    const double l1 = 0.5 * (1.0 + t);
    r.points.push_back({1.0 - l1, l1, 0.0});
  }
  r.weights = {0.5 * w1, 0.5 * w2, 0.5 * w0, 0.5 * w2, 0.5 * w1};
  return r;
}

QuadRule make_triangle_midpoint3() {
  return {{{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}},
          {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
}

QuadRule make_triangle_deg3() {
  QuadRule r;
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(-27.0 / 48.0);
  const double a = 0.6, b = 0.2;
  r.points.push_back({a, b, b});
  r.points.push_back({b, a, b});
  r.points.push_back({b, b, a});
  r.weights.insert(r.weights.end(), 3, 25.0 / 48.0);
  return r;
}

QuadRule make_triangle_deg4() {
  QuadRule r;
  const double a1 = 0.445948490915965, w1 = 0.223381589678011;
  const double a2 = 0.091576213509771, w2 = 0.109951743655322;
  for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
    r.points.push_back({1.0 - 2.0 * a, a, a});
    r.points.push_back({a, 1.0 - 2.0 * a, a});
    r.points.push_back({a, a, 1.0 - 2.0 * a});
    r.weights.insert(r.weights.end(), 3, w);
  }
  return r;
}

QuadRule make_triangle_deg5() {
  QuadRule r;
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(0.225);
  const double a1 = 0.470142064105115, w1 = 0.132394152788506;
  const double a2 = 0.101286507323456, w2 = 0.125939180544827;
  for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
    r.points.push_back({1.0 - 2.0 * a, a, a});
    r.points.push_back({a, 1.0 - 2.0 * a, a});
    r.points.push_back({a, a, 1.0 - 2.0 * a});
    r.weights.insert(r.weights.end(), 3, w);
  }
  return r;
}

}  // namespace

const QuadRule& interval_rule(int degree) {
  static const QuadRule simpson = make_interval_simpson();
  static const QuadRule gauss3 = make_interval_gauss3();
  static const QuadRule gauss5 = make_interval_gauss5();
  if (degree <= 3) return simpson;
  if (degree <= 5) return gauss3;
  return gauss5;
}

const QuadRule& triangle_rule(int degree) {
  static const QuadRule mid3 = make_triangle_midpoint3();
  static const QuadRule deg3 = make_triangle_deg3();
  static const QuadRule deg4 = make_triangle_deg4();
  static const QuadRule deg5 = make_triangle_deg5();
  if (degree <= 2) return mid3;
  if (degree == 3) return deg3;
  if (degree == 4) return deg4;
  return deg5;
}

void for_each_quad_point(const Mesh& mesh, int cell, int degree,
                         const std::function<void(double, double, double)>& fn) {
  const auto& c = mesh.cells[static_cast<std::size_t>(cell)];
  const double measure = mesh.cell_measure(cell);
  const QuadRule& rule = mesh.dim == 1 ? interval_rule(degree) : triangle_rule(degree);
  const auto& p0 = mesh.vertices[static_cast<std::size_t>(c[0])];
  const auto& p1 = mesh.vertices[static_cast<std::size_t>(c[1])];
  const std::array<double, 2> p2 =
      mesh.dim == 1 ? std::array<double, 2>{0.0, 0.0}
                    : mesh.vertices[static_cast<std::size_t>(c[2])];
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto& l = rule.points[q];
    double x, y;
    if (mesh.dim == 1) {
      x = l[0] * p0[0] + l[1] * p1[0];
      y = 0.0;
    } else {
      x = l[0] * p0[0] + l[1] * p1[0] + l[2] * p2[0];
      y = l[0] * p0[1] + l[1] * p1[1] + l[2] * p2[1];
    }
    fn(x, y, rule.weights[q] * measure);
  }
}

double integrate(const Mesh& mesh, int degree,
                 const std::function<double(double, double)>& fn) {
  long double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for_each_quad_point(mesh, c, degree,
                        [&](double x, double y, double w) { acc += static_cast<long double>(w) * fn(x, y); });
  }
  return static_cast<double>(acc);
}

namespace {
double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace

double barycentric_moment_1d(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 1);
}

double barycentric_moment_2d(int a, int b, int c) {
  return 2.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
}

}  // namespace wavecontrol
