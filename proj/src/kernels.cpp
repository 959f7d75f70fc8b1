#include "rmhd/kernels.hpp"

#include <cmath>
#include <cstddef>

namespace rmhd::kernels {

namespace serial {

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void scale_modes(std::span<cplx> c, std::span<const double> multiplier) {
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= multiplier[i];
}

void rotate_pairs(std::span<cplx> phi, std::span<cplx> m, std::span<const double> omega,
                  double sqrt_c, double tau) {
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double cs = std::cos(omega[i] * tau), sn = std::sin(omega[i] * tau);
    const cplx p = phi[i], q = m[i];
    phi[i] = p * cs + sqrt_c * q * sn;
    m[i] = q * cs - p * (sn / sqrt_c);
  }
}

double weighted_energy(std::span<const cplx> c, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += w[i] * std::norm(c[i]);
  return s;
}

double sum_squares(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

}  // namespace serial

namespace omp {

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const long n = long(out.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const long n = long(y.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_modes(std::span<cplx> c, std::span<const double> multiplier) {
  const long n = long(c.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) c[i] *= multiplier[i];
}

void rotate_pairs(std::span<cplx> phi, std::span<cplx> m, std::span<const double> omega,
                  double sqrt_c, double tau) {
  const long n = long(phi.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const double cs = std::cos(omega[i] * tau), sn = std::sin(omega[i] * tau);
    const cplx p = phi[i], q = m[i];
    phi[i] = p * cs + sqrt_c * q * sn;
    m[i] = q * cs - p * (sn / sqrt_c);
  }
}

double weighted_energy(std::span<const cplx> c, std::span<const double> w) {
  const long n = long(c.size());
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static)
  for (long i = 0; i < n; ++i) s += w[i] * std::norm(c[i]);
  return s;
}

double sum_squares(std::span<const double> a) {
  const long n = long(a.size());
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static)
  for (long i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

}  // namespace omp

}  // namespace rmhd::kernels
