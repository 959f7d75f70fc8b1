#include "rmhd/waves.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "rmhd/errors.hpp"

namespace rmhd {

WaveSpeeds mhd_wave_speeds(double Vs, double VA, double cos_theta) {
  require(Vs >= 0.0 && VA >= 0.0, "wave speeds need nonnegative Vs, VA");
  require(cos_theta >= -1.0 && cos_theta <= 1.0, "cos_theta outside [-1, 1]");
  const double S = Vs * Vs + VA * VA;
  const double c2 = cos_theta * cos_theta;
  // radicand is analytically >= (Vs² − VA²)²; clamp roundoff
  const double rad = std::sqrt(std::max(0.0, S * S - 4.0 * Vs * Vs * VA * VA * c2));
  WaveSpeeds w;
  w.c_fast = std::sqrt(0.5 * (S + rad));
  w.c_alfven = VA * std::abs(cos_theta);
  // product form: c_f² c_s² = Vs² VA² cos²θ, no cancellation
  const double cf2 = 0.5 * (S + rad);
  w.c_slow = cf2 > 0.0 ? std::sqrt(Vs * Vs * VA * VA * c2 / cf2) : 0.0;
  return w;
}

namespace {
void check_unit(const std::array<double, 2>& n) {
  require(std::abs(std::hypot(n[0], n[1]) - 1.0) <= 1e-12, "n_perp must be a unit vector");
}
}  // namespace

Eigen::Matrix4d singular_symbol(const std::array<double, 2>& n, double b) {
  check_unit(n);
  require(b > 0.0, "b must be positive");
  // rows: ϱ, v₁, v₂, B∥. From the linear system with ∂ⱼ → i nⱼ:
  //   λϱ  = n·v⊥,  λv⊥ = n (bϱ + B∥),  λB∥ = n·v⊥
  Eigen::Matrix4d A;
  A << 0.0, n[0], n[1], 0.0,
       b * n[0], 0.0, 0.0, n[0],
       b * n[1], 0.0, 0.0, n[1],
       0.0, n[0], n[1], 0.0;
  return A;
}

std::array<double, 4> singular_symbol_eigs(const std::array<double, 2>& n, double b) {
  check_unit(n);
  require(b > 0.0, "b must be positive");
  const double f = std::sqrt(b + 1.0);
  return {-f, 0.0, 0.0, f};
}

std::array<double, 4> singular_symbol_eigs_numeric(const std::array<double, 2>& n, double b) {
  // 𝒜 is not symmetric (the b weight sits on one side only)
  Eigen::EigenSolver<Eigen::Matrix4d> solver(singular_symbol(n, b), false);
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = solver.eigenvalues()[i].real();
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rmhd
