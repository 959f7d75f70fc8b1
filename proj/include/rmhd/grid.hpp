#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "rmhd/errors.hpp"

namespace rmhd {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
/// Volume of the periodic box (2π)³.
inline constexpr double kBoxVolume = kTwoPi * kTwoPi * kTwoPi;

/// Periodic 3-torus discretization. Every axis has length 2π; the anisotropy
/// parameter eps only rescales ∂₃ inside the scaled gradient (∂₁, ∂₂, eps ∂₃).
struct GridSpec {
  int nx = 0;
  int ny = 0;
  int nz = 0;
  double eps = 1.0;

  /// Throws ContractViolation unless every size is even and >= 4 and eps > 0.
  void validate() const;

  std::size_t points() const { return std::size_t(nx) * ny * nz; }
  /// Number of stored complex coefficients (real-to-complex half spectrum in x₃).
  std::size_t modes() const { return std::size_t(nx) * ny * (nz / 2 + 1); }
  int nz_half() const { return nz / 2 + 1; }

  /// Same collocation layout (eps is allowed to differ).
  bool same_shape(const GridSpec& other) const {
    return nx == other.nx && ny == other.ny && nz == other.nz;
  }
  bool operator==(const GridSpec&) const = default;
};

/// Signed wavenumber of storage index i on an axis with n points, in [-n/2, n/2).
inline int wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }

/// Wavenumber used by odd-order derivative symbols: the Nyquist index maps to 0
/// so that spectral derivatives of real fields stay real.
inline int derivative_wavenumber(int i, int n) { return i == n / 2 ? 0 : wavenumber(i, n); }

/// Real values at collocation points, row-major over (x₁, x₂, x₃) with x₃ fastest.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double value = 0.0);
  ScalarField(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double& operator[](std::size_t n) { return values_[n]; }
  double operator[](std::size_t n) const { return values_[n]; }
  double& operator()(int i, int j, int k) { return values_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return values_[index(i, j, k)]; }

  std::size_t index(int i, int j, int k) const {
    return (std::size_t(i) * grid_.ny + j) * grid_.nz + k;
  }

  /// Collocation coordinate 2π i / n on each axis.
  double x1(int i) const { return kTwoPi * i / grid_.nx; }
  double x2(int j) const { return kTwoPi * j / grid_.ny; }
  double x3(int k) const { return kTwoPi * k / grid_.nz; }

  double mean() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

 private:
  GridSpec grid_{};
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Three components; [0], [1] form the perpendicular pair and [2] the parallel one.
using VectorField = std::array<ScalarField, 3>;
/// Transverse 2-vector slice.
using PerpField = std::array<ScalarField, 2>;

VectorField make_vector_field(const GridSpec& grid, double value = 0.0);

/// Fill a field by evaluating f(x₁, x₂, x₃) at every collocation point.
template <class F>
ScalarField sample(const GridSpec& grid, F&& f) {
  ScalarField out(grid);
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j)
      for (int k = 0; k < grid.nz; ++k) out(i, j, k) = f(out.x1(i), out.x2(j), out.x3(k));
  return out;
}

/// Fourier coefficients of a real field. Storage is the real-to-complex half
/// spectrum: index (i, j, l) with i < nx, j < ny, l <= nz/2; coefficients for
/// negative k₃ follow from Hermitian symmetry.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  Complex& operator[](std::size_t n) { return coeffs_[n]; }
  const Complex& operator[](std::size_t n) const { return coeffs_[n]; }

  std::size_t index(int i, int j, int l) const {
    return (std::size_t(i) * grid_.ny + j) * grid_.nz_half() + l;
  }

  /// Coefficient of e^{i k·x} for any integer wavevector in the resolved box.
  Complex at(int k1, int k2, int k3) const;
  /// Set the coefficient of e^{i k·x}; writes the stored (possibly conjugated) slot.
  void set(int k1, int k2, int k3, Complex value);

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex s);

 private:
  GridSpec grid_{};
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(Complex s, SpectralField a);

/// Multiplicity of a stored half-spectrum slot in the full spectrum (1 on the
/// self-conjugate planes l = 0 and l = nz/2, 2 elsewhere).
inline double half_spectrum_weight(int l, int nz) { return (l == 0 || 2 * l == nz) ? 1.0 : 2.0; }

/// Visit every stored mode: f(n, i, j, l, k1, k2, k3) with signed wavenumbers.
template <class F>
void for_each_mode(const GridSpec& g, F&& f) {
  const int nzh = g.nz_half();
  std::size_t n = 0;
  for (int i = 0; i < g.nx; ++i) {
    const int k1 = wavenumber(i, g.nx);
    for (int j = 0; j < g.ny; ++j) {
      const int k2 = wavenumber(j, g.ny);
      for (int l = 0; l < nzh; ++l, ++n) f(n, i, j, l, k1, k2, l);
    }
  }
}

}  // namespace rmhd
