#pragma once

#include <complex>
#include <span>

// Data-parallel inner loops. `serial` is the reference; `omp` is what the
// library calls. Both must agree bit-for-bit on elementwise maps and to
// roundoff on reductions.

namespace rmhd::kernels {

using cplx = std::complex<double>;

namespace serial {
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale_modes(std::span<cplx> c, std::span<const double> multiplier);
/// Per-mode acoustic rotation by angle omega[n]*tau.
void rotate_pairs(std::span<cplx> phi, std::span<cplx> m, std::span<const double> omega,
                  double sqrt_c, double tau);
double weighted_energy(std::span<const cplx> c, std::span<const double> w);
double sum_squares(std::span<const double> a);
}  // namespace serial

namespace omp {
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale_modes(std::span<cplx> c, std::span<const double> multiplier);
void rotate_pairs(std::span<cplx> phi, std::span<cplx> m, std::span<const double> omega,
                  double sqrt_c, double tau);
double weighted_energy(std::span<const cplx> c, std::span<const double> w);
double sum_squares(std::span<const double> a);
}  // namespace omp

}  // namespace rmhd::kernels
