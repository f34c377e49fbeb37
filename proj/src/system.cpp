#include "wavecontrol/system.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace wavecontrol {

namespace {

void check_range(int level, int lo, int hi, const char* block) {
  if (level < lo || level > hi) {
    throw shape_error(std::string("layout: ") + block + " level " + std::to_string(level) +
                      " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

long double ldot(const Vector& a, const Vector& b) {
  long double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    acc += static_cast<long double>(a(i)) * static_cast<long double>(b(i));
  }
  return acc;
}

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_block(Triplets& out, int row_base, int col_base, double coef, const SpMat& mat) {
  for (int k = 0; k < mat.outerSize(); ++k) {
    for (SpMat::InnerIterator it(mat, k); it; ++it) {
      out.emplace_back(row_base + static_cast<int>(it.row()),
                       col_base + static_cast<int>(it.col()), coef * it.value());
    }
  }
}

// Adds the block and its mirror; `mat` is symmetric, so the mirrored values
// are bitwise equal and A stays exactly symmetric.
void add_pair(Triplets& out, int row_base, int col_base, double coef, const SpMat& mat) {
  for (int k = 0; k < mat.outerSize(); ++k) {
    for (SpMat::InnerIterator it(mat, k); it; ++it) {
      const double v = coef * it.value();
      out.emplace_back(row_base + static_cast<int>(it.row()),
                       col_base + static_cast<int>(it.col()), v);
      out.emplace_back(col_base + static_cast<int>(it.col()),
                       row_base + static_cast<int>(it.row()), v);
    }
  }
}

// Difference-quotient square: coef * |a - b|^2 in the `mat` inner product.
void add_difference_stencil(Triplets& out, int base_a, int base_b, double coef,
                            const SpMat& mat) {
  add_block(out, base_a, base_a, coef, mat);
  add_block(out, base_b, base_b, coef, mat);
  add_block(out, base_a, base_b, -coef, mat);
  add_block(out, base_b, base_a, -coef, mat);
}

}  // namespace

int DofLayout::u(int level) const {
  check_range(level, 0, N, "u");
  return u_offset() + level * Nh;
}

int DofLayout::U(int level) const {
  check_range(level, 0, N, "U");
  return U_offset() + level * Nh;
}

int DofLayout::z(int level) const {
  check_range(level, 2, N, "z");
  return z_offset() + (level - 2) * Nh;
}

int DofLayout::Z(int level) const {
  check_range(level, 0, N - 2, "Z");
  return Z_offset() + level * Nh;
}

SaddleSystem assemble_saddle(const FemSpace& space, const TimeGrid& grid,
                             const Vector& chi_vertices, const ProblemData& data,
                             SaddleScales scales) {
  SaddleSystem sys;
  sys.layout = DofLayout{grid.N, space.n_dofs};
  sys.grid = grid;
  sys.h = space.mesh->h;
  sys.scales = scales;
  sys.space = &space;
  sys.M = assemble_mass(space);
  sys.K = assemble_stiffness(space);
  sys.Mchi = assemble_weighted_mass(space, chi_vertices);
  sys.chi_vertices = chi_vertices;
  sys.g0_h = nodal_representation(data.g0, space, /*elliptic=*/true);
  sys.g1_h = nodal_representation(data.g1, space, /*elliptic=*/false);

  const int N = grid.N, Nh = space.n_dofs;
  const double tau = grid.tau, h = sys.h;
  const double rw = scales.r_weight, jw = scales.j1_weight;
  const DofLayout& L = sys.layout;

  Triplets trip;
  trip.reserve(static_cast<std::size_t>(sys.M.nonZeros()) * static_cast<std::size_t>(20 * N));

  // Data-mismatch penalties: boundary-in-time energies of u.
  add_block(trip, L.u(0), L.u(0), rw, sys.K);
  add_block(trip, L.u(N), L.u(N), rw, sys.K);
  add_difference_stencil(trip, L.u(1), L.u(0), rw / (tau * tau), sys.M);
  add_difference_stencil(trip, L.u(N), L.u(N - 1), rw / (tau * tau), sys.M);

  // Wave form coupling u-levels with the multiplier z (and its transpose).
  for (int n = 2; n <= N; ++n) {
    add_pair(trip, L.u(n), L.z(n), 1.0 / tau, sys.M);
    add_pair(trip, L.u(n), L.z(n), tau, sys.K);
    add_pair(trip, L.u(n - 1), L.z(n), -2.0 / tau, sys.M);
    add_pair(trip, L.u(n - 2), L.z(n), 1.0 / tau, sys.M);
  }

  // Adjoint wave form coupling U-levels with the multiplier Z.
  for (int n = 0; n <= N - 2; ++n) {
    add_pair(trip, L.U(n), L.Z(n), 1.0 / tau, sys.M);
    add_pair(trip, L.U(n), L.Z(n), tau, sys.K);
    add_pair(trip, L.U(n + 1), L.Z(n), -2.0 / tau, sys.M);
    add_pair(trip, L.U(n + 2), L.Z(n), 1.0 / tau, sys.M);
  }

  // Localized control term.
  for (int n = 2; n <= N; ++n) {
    add_pair(trip, L.U(n), L.z(n), -tau, sys.Mchi);
  }

  // Gradient stabilizer on the control.
  add_block(trip, L.U(N), L.U(N), jw * h * h, sys.K);
  add_difference_stencil(trip, L.U(N), L.U(N - 1), jw * h * h / (tau * tau), sys.K);
  add_difference_stencil(trip, L.U(1), L.U(0), jw * h * h / (tau * tau), sys.K);
  for (int n = 1; n <= N; ++n) {
    add_difference_stencil(trip, L.U(n), L.U(n - 1), jw * h * h / tau, sys.K);
  }

  sys.A.resize(L.total(), L.total());
  sys.A.setFromTriplets(trip.begin(), trip.end());

  sys.b = Vector::Zero(L.total());
  const Vector Mg1 = sys.M * sys.g1_h;
  sys.b.segment(L.u(0), Nh) = rw * (sys.K * sys.g0_h - Mg1 / tau);
  sys.b.segment(L.u(1), Nh) = rw * (Mg1 / tau);
  return sys;
}

StateFields extract_state(const SaddleSystem& sys, const Vector& x) {
  if (x.size() != sys.layout.total()) throw shape_error("state: wrong coupled vector length");
  const int N = sys.layout.N, Nh = sys.layout.Nh;
  StateFields f{make_field(sys.grid, 0, N, Nh), make_field(sys.grid, 0, N, Nh),
                make_field(sys.grid, 2, N, Nh), make_field(sys.grid, 0, N - 2, Nh)};
  for (int n = 0; n <= N; ++n) {
    f.u.at(n) = x.segment(sys.layout.u(n), Nh);
    f.U.at(n) = x.segment(sys.layout.U(n), Nh);
  }
  for (int n = 2; n <= N; ++n) f.z.at(n) = x.segment(sys.layout.z(n), Nh);
  for (int n = 0; n <= N - 2; ++n) f.Z.at(n) = x.segment(sys.layout.Z(n), Nh);
  return f;
}

Vector pack_state(const SaddleSystem& sys, const StateFields& f) {
  const int N = sys.layout.N, Nh = sys.layout.Nh;
  Vector x = Vector::Zero(sys.layout.total());
  for (int n = 0; n <= N; ++n) {
    x.segment(sys.layout.u(n), Nh) = f.u.at(n);
    x.segment(sys.layout.U(n), Nh) = f.U.at(n);
  }
  for (int n = 2; n <= N; ++n) x.segment(sys.layout.z(n), Nh) = f.z.at(n);
  for (int n = 0; n <= N - 2; ++n) x.segment(sys.layout.Z(n), Nh) = f.Z.at(n);
  return x;
}

double eval_G(const SaddleSystem& sys, const SpaceTimeField& u, const SpaceTimeField& z) {
  const double tau = sys.grid.tau;
  long double acc = 0.0;
  for (int n = 2; n <= sys.grid.N; ++n) {
    const Vector d2 = (u.at(n) - 2.0 * u.at(n - 1) + u.at(n - 2)) / (tau * tau);
    acc += tau * (ldot(d2, sys.M * z.at(n)) + ldot(u.at(n), sys.K * z.at(n)));
  }
  return static_cast<double>(acc);
}

double eval_Gstar(const SaddleSystem& sys, const SpaceTimeField& Z, const SpaceTimeField& U) {
  const double tau = sys.grid.tau;
  long double acc = 0.0;
  for (int n = 0; n <= sys.grid.N - 2; ++n) {
    const Vector d2 = (U.at(n) - 2.0 * U.at(n + 1) + U.at(n + 2)) / (tau * tau);
    acc += tau * (ldot(Z.at(n), sys.M * d2) + ldot(Z.at(n), sys.K * U.at(n)));
  }
  return static_cast<double>(acc);
}

double eval_R(const SaddleSystem& sys, const SpaceTimeField& u) {
  const int N = sys.grid.N;
  const double tau = sys.grid.tau;
  const Vector dN = (u.at(N) - u.at(N - 1)) / tau;
  const Vector e0 = u.at(0) - sys.g0_h;
  const Vector d1 = (u.at(1) - u.at(0)) / tau - sys.g1_h;
  long double acc = ldot(u.at(N), sys.K * u.at(N));
  acc += ldot(dN, sys.M * dN);
  acc += ldot(e0, sys.K * e0);
  acc += ldot(d1, sys.M * d1);
  return 0.5 * static_cast<double>(acc);
}

double eval_J1(const SaddleSystem& sys, const SpaceTimeField& U) {
  const int N = sys.grid.N;
  const double tau = sys.grid.tau, h2 = sys.h * sys.h;
  const Vector dN = (U.at(N) - U.at(N - 1)) / tau;
  const Vector d1 = (U.at(1) - U.at(0)) / tau;
  long double acc = ldot(U.at(N), sys.K * U.at(N));
  acc += ldot(dN, sys.K * dN);
  acc += ldot(d1, sys.K * d1);
  for (int n = 1; n <= N; ++n) {
    const Vector dn = (U.at(n) - U.at(n - 1)) / tau;
    acc += tau * ldot(dn, sys.K * dn);
  }
  return 0.5 * h2 * static_cast<double>(acc);
}

double eval_J(const SaddleSystem& sys, const Vector& x) {
  const StateFields f = extract_state(sys, x);
  const double tau = sys.grid.tau;
  long double cross = 0.0;
  for (int n = 2; n <= sys.grid.N; ++n) {
    cross += tau * ldot(f.U.at(n), sys.Mchi * f.z.at(n));
  }
  return eval_G(sys, f.u, f.z) - static_cast<double>(cross) + eval_Gstar(sys, f.Z, f.U) +
         sys.scales.r_weight * eval_R(sys, f.u) + sys.scales.j1_weight * eval_J1(sys, f.U);
}

KernelCheckResult kernel_check(const SaddleSystem& sys, int max_dofs, double tol) {
  if (sys.layout.total() > max_dofs) {
    throw config_error("kernel check: dense SVD guarded to " + std::to_string(max_dofs) +
                       " dofs, got " + std::to_string(sys.layout.total()));
  }
  const Eigen::MatrixXd dense(sys.A);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
  const auto& sv = svd.singularValues();
  KernelCheckResult res;
  res.sigma_max = sv(0);
  res.sigma_min = sv(sv.size() - 1);
  res.ratio = res.sigma_max > 0.0 ? res.sigma_min / res.sigma_max : 0.0;
  res.pass = res.ratio > tol;
  return res;
}

double max_asymmetry(const SpMat& A) {
  SpMat At = SpMat(A.transpose());
  SpMat D = A - At;
  double max_abs = 0.0, max_diff = 0.0;
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) max_abs = std::max(max_abs, std::abs(it.value()));
  }
  for (int k = 0; k < D.outerSize(); ++k) {
    for (SpMat::InnerIterator it(D, k); it; ++it) max_diff = std::max(max_diff, std::abs(it.value()));
  }
  return max_abs > 0.0 ? max_diff / max_abs : 0.0;
}

}  // namespace wavecontrol
